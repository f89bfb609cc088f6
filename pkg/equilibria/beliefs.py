"""
상대 하위 프로파일 위의 거리와 신념 집합 B_i(π, r_i)

다면체 거리(L1_CONCAT, LINF_PRODUCT)는 공 ∩ 단체곱의 꼭짓점을 정확히 열거하고,
L2_CONCAT은 Dykstra 교대 사영으로 반복 해법에 사영 연산을 제공합니다.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import CapabilityError, InvalidParametersError, ShapeError

logger = logging.getLogger(__name__)

# contains() 경계 허용 오차
CONTAINS_TOL = 1e-12
# L1 꼭짓점 열거에서 검사할 활성 제약 조합 수의 상한
MAX_ACTIVE_SETS = 200_000


class Metric(Enum):
    L2_CONCAT = 'l2'
    L1_CONCAT = 'l1'
    LINF_PRODUCT = 'linf'

    @classmethod
    def from_flag(cls, flag):
        try:
            return cls(str(flag).lower())
        except ValueError as e:
            raise InvalidParametersError(f"알 수 없는 거리 '{flag}' (l2, l1, linf 중 선택)") from e

    @property
    def is_polytope(self):
        return self is not Metric.L2_CONCAT


def _as_subprofile(point):
    return tuple(np.asarray(v, dtype=float) for v in point)


def _check_same_shape(x, y):
    if len(x) != len(y) or any(a.shape != b.shape for a, b in zip(x, y)):
        raise ShapeError(
            f"하위 프로파일 모양이 다릅니다: {[a.shape for a in x]} vs {[b.shape for b in y]}"
        )


def concat(point):
    return np.concatenate([np.asarray(v, dtype=float) for v in point])


def split(vector, sizes):
    parts = []
    start = 0
    for size in sizes:
        parts.append(np.array(vector[start:start + size]))
        start += size
    return tuple(parts)


def distance(metric, x, y):
    """
    두 상대 하위 프로파일 사이의 거리

    - L2_CONCAT: 이어 붙인 확률 벡터의 유클리드 거리
    - L1_CONCAT: 이어 붙인 확률 벡터의 L1 거리
    - LINF_PRODUCT: 상대별 최대 좌표 차이의 최댓값
    """
    x = _as_subprofile(x)
    y = _as_subprofile(y)
    _check_same_shape(x, y)
    if not x:
        return 0.0
    if metric is Metric.LINF_PRODUCT:
        return float(max(np.max(np.abs(a - b)) for a, b in zip(x, y)))
    diff = concat(x) - concat(y)
    if metric is Metric.L1_CONCAT:
        return float(np.sum(np.abs(diff)))
    return float(np.sqrt(np.dot(diff, diff)))


def is_subprofile(point, tol=CONTAINS_TOL):
    return all(np.all(v >= -tol) and abs(v.sum() - 1.0) <= tol for v in _as_subprofile(point))


@dataclass(frozen=True, eq=False)
class BeliefSet:
    """
    플레이어 owner의 신념 집합: center(π_{-i})에서 metric 거리 radius 이내의 상대 하위 프로파일

    실현 집합은 공과 상대 단체들의 곱의 교집합이며, 항상 center를 포함합니다.
    """
    owner: int
    center: tuple
    radius: float
    metric: Metric

    def __post_init__(self):
        radius = float(self.radius)
        if not math.isfinite(radius) or radius < 0:
            raise InvalidParametersError(f"반지름은 0 이상의 유한한 값이어야 합니다 (입력: {self.radius}).")
        center = _as_subprofile(self.center)
        if not is_subprofile(center):
            raise InvalidParametersError("신념 집합의 중심이 유효한 확률 벡터가 아닙니다.")
        object.__setattr__(self, 'radius', radius)
        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'metric', Metric(self.metric))

    @property
    def sizes(self):
        return tuple(v.size for v in self.center)

    @property
    def is_degenerate(self):
        return self.radius == 0.0

    def with_radius(self, radius):
        return BeliefSet(self.owner, self.center, radius, self.metric)


def belief_for(profile, player, radius, metric):
    return BeliefSet(player, profile.opponents(player), radius, metric)


def contains(belief, point):
    point = _as_subprofile(point)
    _check_same_shape(belief.center, point)
    if not is_subprofile(point):
        return False
    return distance(belief.metric, belief.center, point) <= belief.radius + CONTAINS_TOL


def pure_subprofiles(sizes):
    """단체곱의 꼭짓점(순수 하위 프로파일)을 사전식으로 생성"""
    for actions in itertools.product(*(range(size) for size in sizes)):
        yield tuple(np.eye(size)[a] for size, a in zip(sizes, actions))


def covers_simplex(belief):
    """공이 단체곱 전체를 덮는지 (볼록 거리의 최댓값은 꼭짓점에서 달성된다)"""
    if belief.radius == 0.0:
        return False
    farthest = max(distance(belief.metric, belief.center, v) for v in pure_subprofiles(belief.sizes))
    return farthest <= belief.radius


def interior_point(belief):
    """신념 집합의 상대 내부 점: 중심에서 균등 분포 쪽으로 조금 이동한 점"""
    if belief.radius == 0.0:
        return belief.center
    uniform = tuple(np.full(size, 1.0 / size) for size in belief.sizes)
    gap = distance(belief.metric, belief.center, uniform)
    if gap == 0.0:
        return belief.center
    alpha = min(0.5, belief.radius / (2.0 * gap))
    return tuple((1 - alpha) * c + alpha * u for c, u in zip(belief.center, uniform))


@dataclass(frozen=True, eq=False)
class VertexPolytope:
    """
    신념 집합(또는 잡음 변형 집합)을 실현하는 꼭짓점 목록

    - vertices: 상대 하위 프로파일 튜플
    - provenance: 어떤 집합을 실현하는지 설명하는 라벨
    - belief: 원본 BeliefSet (잡음 변형 집합이면 None)
    """
    vertices: tuple
    provenance: str
    belief: BeliefSet = None

    @property
    def count(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)


def _dedupe(points, decimals=12):
    seen = set()
    unique = []
    for point in points:
        key = tuple(np.round(concat(point), decimals).tolist())
        if key not in seen:
            seen.add(key)
            unique.append(point)
    return unique


def _box_slice_vertices(lower, upper):
    """{y ∈ 단체 : lower ≤ y ≤ upper}의 꼭짓점: 자유 좌표 하나를 제외하고 모두 경계값"""
    size = lower.size
    if size == 1:
        return [np.ones(1)]
    vertices = []
    for free in range(size):
        others = [k for k in range(size) if k != free]
        for choice in itertools.product(*((lower[k], upper[k]) for k in others)):
            rest = 1.0 - sum(choice)
            if lower[free] - CONTAINS_TOL <= rest <= upper[free] + CONTAINS_TOL:
                y = np.empty(size)
                y[others] = choice
                y[free] = min(max(rest, lower[free]), upper[free])
                vertices.append(y)
    return [v[0] for v in _dedupe([(v,) for v in vertices])]


def _linf_vertices(belief):
    per_opponent = []
    for x in belief.center:
        lower = np.maximum(0.0, x - belief.radius)
        upper = np.minimum(1.0, x + belief.radius)
        per_opponent.append(_box_slice_vertices(lower, upper))
    return [tuple(combo) for combo in itertools.product(*per_opponent)]


def _l1_vertices(belief):
    """
    L1 공 ∩ 단체곱의 꼭짓점을 들어올린 H-표현 (y, s)에서 활성 제약 조합으로 열거합니다.

    제약: y − s ≤ x, −y − s ≤ −x, Σs ≤ r, −y ≤ 0, 상대별 Σy = 1
    사영한 점들의 볼록 껍질이 정확히 신념 집합과 같습니다.
    """
    x = concat(belief.center)
    m = x.size
    sizes = belief.sizes
    eye = np.eye(m)
    zeros = np.zeros((m, m))
    a_ub = np.vstack([
        np.hstack([eye, -eye]),
        np.hstack([-eye, -eye]),
        np.hstack([np.zeros((1, m)), np.ones((1, m))]),
        np.hstack([-eye, zeros]),
    ])
    b_ub = np.concatenate([x, -x, [belief.radius], np.zeros(m)])
    a_eq = np.zeros((len(sizes), 2 * m))
    start = 0
    for row, size in enumerate(sizes):
        a_eq[row, start:start + size] = 1.0
        start += size
    b_eq = np.ones(len(sizes))

    dim = 2 * m
    need = dim - len(sizes)
    combos = math.comb(a_ub.shape[0], need)
    if combos > MAX_ACTIVE_SETS:
        raise CapabilityError(
            f"L1 꼭짓점 열거 비용이 너무 큽니다 (활성 제약 조합 {combos}개 > {MAX_ACTIVE_SETS}).",
            player=belief.owner,
        )

    points = []
    for active in itertools.combinations(range(a_ub.shape[0]), need):
        matrix = np.vstack([a_ub[list(active)], a_eq])
        if np.linalg.matrix_rank(matrix) < dim:
            continue
        rhs = np.concatenate([b_ub[list(active)], b_eq])
        z = np.linalg.solve(matrix, rhs)
        if np.all(a_ub @ z <= b_ub + 1e-10):
            y = np.clip(z[:m], 0.0, None)
            points.append(split(y, sizes))
    return _dedupe(points, decimals=10)


def ball_vertices(belief):
    """
    다면체 거리의 공 ∩ 단체곱 꼭짓점 목록을 반환합니다.

    Raises:
        CapabilityError: L2_CONCAT (반복 해법을 사용해야 함)
    """
    if belief.metric is Metric.L2_CONCAT:
        raise CapabilityError(
            "L2_CONCAT 공은 다면체가 아니므로 꼭짓점이 유한하지 않습니다. 반복 내부 해법을 사용하세요.",
            player=belief.owner,
        )
    if belief.radius == 0.0:
        return VertexPolytope((belief.center,), 'ball(r=0)', belief)
    if covers_simplex(belief):
        return VertexPolytope(tuple(pure_subprofiles(belief.sizes)), 'simplex', belief)
    if belief.metric is Metric.LINF_PRODUCT:
        vertices = _linf_vertices(belief)
    else:
        vertices = _l1_vertices(belief)
    logger.debug(f"신념 집합 꼭짓점 {len(vertices)}개 (거리 {belief.metric.value}, r={belief.radius:g})")
    return VertexPolytope(tuple(vertices), f"ball({belief.metric.value}, r={belief.radius:g})", belief)


def noisy_variant_vertices(pure_point, epsilon):
    """
    순수 상대 하위 프로파일 a_{-i}의 ε-잡음 변형 집합 {π : π_j(a_j) ≥ 1−ε}의 꼭짓점

    상대별 꼭짓점 {e_a} ∪ {(1−ε)e_a + ε e_b : b ≠ a}의 곱입니다.
    """
    if not 0.0 < epsilon < 1.0:
        raise InvalidParametersError(f"ε은 (0, 1) 구간이어야 합니다 (입력: {epsilon}).")
    per_opponent = []
    for vector in _as_subprofile(pure_point):
        action = int(np.argmax(vector))
        if vector[action] < 1.0 - CONTAINS_TOL:
            raise InvalidParametersError("잡음 변형의 기준 프로파일은 순수 전략이어야 합니다.")
        base = np.eye(vector.size)[action]
        options = [base]
        for other in range(vector.size):
            if other != action:
                options.append((1.0 - epsilon) * base + epsilon * np.eye(vector.size)[other])
        per_opponent.append(options)
    vertices = tuple(tuple(combo) for combo in itertools.product(*per_opponent))
    return VertexPolytope(vertices, f"noisy(eps={epsilon:g})")


# --- L2 반복 경로용 사영 ---

def project_simplex(vector):
    """유클리드 사영: 단체 위로 (정렬 기반)"""
    size = vector.size
    ordered = np.sort(vector)[::-1]
    cumulative = np.cumsum(ordered) - 1.0
    index = np.arange(1, size + 1)
    valid = ordered - cumulative / index > 0
    rho = index[valid][-1]
    theta = cumulative[valid][-1] / rho
    return np.maximum(vector - theta, 0.0)


def _project_product(vector, sizes):
    return concat(tuple(project_simplex(part) for part in split(vector, sizes)))


def _project_ball(vector, center, radius):
    gap = vector - center
    norm = np.sqrt(np.dot(gap, gap))
    if norm <= radius:
        return vector
    return center + gap * (radius / norm)


def project_onto_belief(belief, point, max_iter=500, tol=1e-13):
    """
    L2 공 ∩ 단체곱 위로의 유클리드 사영 (Dykstra 교대 사영)

    결과는 단체곱 위에 있도록 만든 뒤, 공을 벗어난 만큼 중심 쪽으로 줄여 두 집합 모두에 속하게 합니다.
    """
    sizes = belief.sizes
    center = concat(belief.center)
    z = concat(point)
    y = z.copy()
    p = np.zeros_like(z)
    q = np.zeros_like(z)
    x = y
    for _ in range(max_iter):
        x = _project_product(y + p, sizes)
        p = y + p - x
        y_next = _project_ball(x + q, center, belief.radius)
        q = x + q - y_next
        moved = np.max(np.abs(y_next - y))
        y = y_next
        if moved < tol:
            break
    gap = np.sqrt(np.dot(x - center, x - center))
    if gap > belief.radius > 0:
        x = center + (x - center) * (belief.radius / gap)
    elif belief.radius == 0:
        x = center
    return split(x, sizes)


def sample_points(belief, count, rng):
    """
    신념 집합 안의 무작위 점들: 단체곱에서 디리클레 표본을 뽑은 뒤 중심 쪽으로 줄여 공 안에 넣습니다.
    """
    points = []
    for _ in range(count):
        draw = tuple(rng.dirichlet(np.ones(size)) for size in belief.sizes)
        gap = distance(belief.metric, belief.center, draw)
        if gap == 0.0:
            points.append(draw)
            continue
        scale = min(1.0, belief.radius / gap) * rng.uniform()
        points.append(tuple(c + scale * (d - c) for c, d in zip(belief.center, draw)))
    return points
