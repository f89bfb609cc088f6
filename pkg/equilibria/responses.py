"""
신념 집합에 대한 응답 판정 엔진

신념 집합은 유한한 평가점 집합 V와 선형(다중선형) 극값 오라클로 실현됩니다.
- 다면체 경로: V = 꼭짓점 전체, 오라클 = V 위의 최소/최대 (정확)
- L2 경로: V = 절단평면으로 늘어나는 점들, 오라클 = 공 ∩ 단체곱 위의 사영 기반 해법 (반복)
바깥 최적화(maximin, 최소 최악 후회, 지배 탐색)는 모두 V 위의 선형 계획 + 절단평면 루프이며,
다면체 경로에서는 한 번에 끝납니다.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import linprog

from .beliefs import (
    Metric, concat, covers_simplex, ball_vertices, interior_point, noisy_variant_vertices,
    pure_subprofiles, project_simplex, split,
)
from .exceptions import CapabilityError, InvalidParametersError, ShapeError, SolverError
from .games import MixedStrategy, action_values, check_opponents

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverSettings:
    """
    모든 수치 설정을 담는 레코드

    - tolerance: 정확(꼭짓점/LP) 경로의 판정 허용 오차
    - iterative_tolerance: L2 반복 경로의 판정 허용 오차
    - max_iter: 사영/절단평면/조건부 경사 반복 상한
    - lp_feasibility: HiGHS 실행 가능성 허용 오차
    """
    tolerance: float = 1e-9
    iterative_tolerance: float = 1e-6
    max_iter: int = 500
    lp_feasibility: float = 1e-10

    @classmethod
    def from_settings(cls, **overrides):
        """Django 설정(DBEQ_*)에서 기본값을 읽습니다. 설정이 없으면 클래스 기본값을 씁니다."""
        values = {}
        try:
            from django.conf import settings
            if settings.configured:
                values = {
                    'tolerance': float(getattr(settings, 'DBEQ_TOL', cls.tolerance)),
                    'iterative_tolerance': float(getattr(settings, 'DBEQ_ITER_TOL', cls.iterative_tolerance)),
                    'max_iter': int(getattr(settings, 'DBEQ_MAX_ITER', cls.max_iter)),
                }
        except ImportError:
            pass
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


DEFAULT_SETTINGS = SolverSettings()


class Sense(Enum):
    MIN = 'min'
    MAX = 'max'


class OuterNotion(Enum):
    MAXIMIN = 'maximin'
    MAXIMAX = 'maximax'
    MIN_WORST_REGRET = 'min_worst_regret'


class Relation(Enum):
    STRICT = 'strict'
    WEAK = 'weak'
    NONE = 'none'


# --- 선형 계획법 ---

def solve_lp(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, bounds=None,
             settings=DEFAULT_SETTINGS, allow_infeasible=False):
    """
    scipy.optimize.linprog(method='highs') 래퍼

    Returns:
        OptimizeResult, 또는 allow_infeasible이고 실행 불가능하면 None
    """
    options = {
        'primal_feasibility_tolerance': settings.lp_feasibility,
        'dual_feasibility_tolerance': settings.lp_feasibility,
    }
    result = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds,
                     method='highs', options=options)
    if result.status == 2 and allow_infeasible:
        return None
    if not result.success:
        logger.warning(f"선형 계획법 실패 (상태 {result.status}): {result.message}")
        raise SolverError(result.message)
    return result


def strategy_from(vector):
    probs = np.clip(np.asarray(vector, dtype=float), 0.0, None)
    total = probs.sum()
    if total <= 0:
        raise SolverError("LP 해가 확률 벡터가 아닙니다.")
    return MixedStrategy(probs / total)


def _probs(strategy):
    return strategy.probs if isinstance(strategy, MixedStrategy) else np.asarray(strategy, dtype=float)


# --- 신념 집합 실현 ---

class BeliefRealization:
    """
    한 플레이어의 신념 집합 위 평가기

    columns[a, v] = u_i(a, V[v]) 이므로 자기 전략 σ에 대한 값은 σ @ columns 입니다.
    """

    def __init__(self, game, player, belief, settings=DEFAULT_SETTINGS):
        if belief.owner != player:
            raise InvalidParametersError(f"신념 집합의 소유자({belief.owner})와 플레이어({player})가 다릅니다.")
        check_opponents(game, player, belief.center)
        self.game = game
        self.player = player
        self.belief = belief
        self.settings = settings
        self.sizes = belief.sizes

        if belief.radius == 0.0:
            points, self.exact = [belief.center], True
        elif covers_simplex(belief):
            points, self.exact = list(pure_subprofiles(self.sizes)), True
        elif belief.metric.is_polytope:
            if belief.metric is Metric.L1_CONCAT and game.players > 2:
                raise CapabilityError(
                    "L1_CONCAT 공은 상대별 곱 집합이 아니어서 다중선형 효용의 극값이 꼭짓점에서 "
                    "보장되지 않습니다. LINF_PRODUCT를 사용하세요.", player=player)
            points, self.exact = list(ball_vertices(belief).vertices), True
        else:
            if game.players > 2 and not all(np.max(v) >= 1.0 - 1e-12 for v in belief.center):
                raise CapabilityError(
                    "혼합 중심을 가진 3인 이상 게임의 L2_CONCAT 공은 정확히 풀 수 없습니다. "
                    "브루트포스 오라클을 사용하세요.", player=player)
            points, self.exact = [belief.center], False

        self.points = list(points)
        self.columns = np.column_stack([action_values(game, player, p) for p in self.points])
        self.tolerance = settings.tolerance if self.exact else settings.iterative_tolerance
        self.bracket = None if self.exact else self._bracket()

    def _bracket(self):
        """
        순수 중심 L2 공을 안팎에서 감싸는 잡음 변형 다면체의 꼭짓점 열 (안쪽, 바깥쪽)

        안쪽: ε = r/√(2k) (k: 상대 수), 바깥쪽: 상대별 이탈 질량 t_j ≤ r·√((m−1)/m)
        """
        if not all(np.max(v) >= 1.0 - 1e-12 for v in self.belief.center):
            return None
        radius = self.belief.radius
        inner = radius / np.sqrt(2.0 * len(self.sizes))
        largest = max(self.sizes)
        outer = radius * np.sqrt((largest - 1) / largest)
        inner_points = list(noisy_variant_vertices(self.belief.center, inner))
        if outer >= 1.0:
            outer_points = list(pure_subprofiles(self.sizes))
        else:
            outer_points = list(noisy_variant_vertices(self.belief.center, outer))

        def columns(points):
            return np.column_stack([action_values(self.game, self.player, p) for p in points])

        return columns(inner_points), columns(outer_points), inner_points

    @property
    def actions(self):
        return self.columns.shape[0]

    def add(self, point):
        self.points.append(point)
        column = action_values(self.game, self.player, point).reshape(-1, 1)
        self.columns = np.hstack([self.columns, column])

    def reference_column(self):
        """약한 지배 탐색의 목적 함수 열: 꼭짓점 평균, 또는 L2 공의 상대 내부 점"""
        if self.exact:
            return self.columns.mean(axis=1)
        return action_values(self.game, self.player, interior_point(self.belief))

    def extreme(self, weights, sense):
        """
        신념 집합 위에서 weights · u_i(·, y)의 최솟값/최댓값

        Returns:
            tuple: (값, 달성점 y)
        """
        weights = np.asarray(weights, dtype=float)
        sense = Sense(sense)
        if self.exact:
            values = weights @ self.columns
            index = int(np.argmin(values) if sense is Sense.MIN else np.argmax(values))
            return float(values[index]), self.points[index]
        sign = 1.0 if sense is Sense.MIN else -1.0
        if self.game.players == 2:
            matrix = self.game.payoffs[self.player]
            oriented = matrix if self.player == 0 else matrix.T
            y = self._linear_minimizer(sign * (weights @ oriented))
            point = split(y, self.sizes)
        else:
            point = self._conditional_gradient(weights, sign)
        value = float(weights @ action_values(self.game, self.player, point))
        return value, point

    def extreme_bounds(self, weights, sense):
        """
        참 극값이 들어 있는 구간 (아래, 위). 정확 경로에서는 값 하나, 괄호가 없으면 None
        """
        weights = np.asarray(weights, dtype=float)
        sense = Sense(sense)
        if self.exact:
            value = self.extreme(weights, sense)[0]
            return value, value
        if self.bracket is None:
            return None
        inner, outer = weights @ self.bracket[0], weights @ self.bracket[1]
        if sense is Sense.MIN:
            return float(outer.min()), float(inner.min())
        return float(inner.max()), float(outer.max())

    # --- L2 반복 경로 ---

    def _project(self, vector):
        return concat(tuple(project_simplex(part) for part in split(vector, self.sizes)))

    def _face_point(self, center, gradient):
        """g를 최소화하는 단체곱 면 위로 center를 사영한 점"""
        parts = []
        for c, g in zip(split(center, self.sizes), split(gradient, self.sizes)):
            scale = max(1.0, float(np.max(np.abs(g))))
            face = np.flatnonzero(g <= g.min() + 1e-15 * scale)
            y = np.zeros_like(c)
            y[face] = project_simplex(c[face])
            parts.append(y)
        return concat(tuple(parts))

    def _linear_minimizer(self, gradient):
        """
        L2 공 ∩ 단체곱 위에서 g·y를 최소화합니다.

        최적점은 사영 경로 y(μ) = P(c − μg) 위에 있고, ||y(μ) − c||가 μ에 대해 단조이므로
        공 경계에 닿는 μ를 이분 탐색합니다.
        """
        center = concat(self.belief.center)
        radius = self.belief.radius
        norm = float(np.sqrt(np.dot(gradient, gradient)))
        if norm == 0.0:
            return center
        face = self._face_point(center, gradient)
        if np.sqrt(np.dot(face - center, face - center)) <= radius:
            return face

        def gap(mu):
            y = self._project(center - mu * gradient)
            return float(np.sqrt(np.dot(y - center, y - center)))

        lo, hi = 0.0, radius / norm
        for _ in range(200):
            if gap(hi) > radius:
                break
            lo, hi = hi, hi * 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if gap(mid) <= radius:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-12 * hi:
                break
        return self._project(center - lo * gradient)

    def _weighted_tensor(self, weights):
        return np.tensordot(weights, self.game.payoffs[self.player], axes=([0], [self.player]))

    @staticmethod
    def _contract(tensor, point, skip=None):
        for k in reversed(range(len(point))):
            if k != skip:
                tensor = np.tensordot(tensor, point[k], axes=([k], [0]))
        return tensor

    def _conditional_gradient(self, weights, sign):
        """
        다중선형 목적 함수의 조건부 경사법 (다중 시작점)

        시작점은 중심, 안쪽 잡음 다면체의 최선 꼭짓점, 각 순수 하위 프로파일 방향으로 반지름만큼 이동한 점입니다.
        선분 위 목적 함수는 상대 수 차수의 다항식이므로 선 탐색은 표본 몇 개로 정확히 풉니다.
        """
        tensor = sign * self._weighted_tensor(weights)
        center = concat(self.belief.center)
        radius = self.belief.radius
        starts = [center]
        if self.bracket is not None:
            inner_values = sign * (weights @ self.bracket[0])
            starts.append(concat(self.bracket[2][int(np.argmin(inner_values))]))
        for vertex in pure_subprofiles(self.sizes):
            target = concat(vertex)
            gap = float(np.sqrt(np.dot(target - center, target - center)))
            if gap > 0:
                starts.append(center + min(1.0, radius / gap) * (target - center))

        def value(y):
            return float(self._contract(tensor, split(y, self.sizes)))

        degree = len(self.sizes)
        nodes = np.linspace(0.0, 1.0, degree + 1)
        stop = self.settings.iterative_tolerance * 1e-2
        best_y, best_value = center, value(center)
        for start in starts:
            y = start
            current = value(y)
            for _ in range(self.settings.max_iter):
                point = split(y, self.sizes)
                gradient = concat(tuple(self._contract(tensor, point, skip=j) for j in range(len(point))))
                direction = self._linear_minimizer(gradient) - y
                if -float(gradient @ direction) <= stop:
                    break
                line = np.polyfit(nodes, [value(y + g * direction) for g in nodes], degree)
                steps = [1.0] + [float(root.real) for root in np.roots(np.polyder(line))
                                 if abs(root.imag) < 1e-12 and 0.0 < root.real < 1.0]
                step = min(steps, key=lambda g: np.polyval(line, g))
                trial = value(y + step * direction)
                if trial >= current - stop:
                    break
                y, current = y + step * direction, trial
            if current < best_value:
                best_y, best_value = y, current
        return split(best_y, self.sizes)


def realize(game, player, belief, settings=DEFAULT_SETTINGS):
    return BeliefRealization(game, player, belief, settings)


# --- 내부 극값과 후회 ---

def inner_extreme(game, player, strategy, belief, sense, settings=DEFAULT_SETTINGS):
    """신념 집합 위 u_i(strategy, ·)의 최솟값(MIN) 또는 최댓값(MAX)과 달성점"""
    realization = realize(game, player, belief, settings)
    _check_strategy(realization, strategy)
    return realization.extreme(_probs(strategy), sense)


def regret(game, player, strategy, opponent):
    """reg_i(π_i, π_{-i}) = max_a u_i(a, π_{-i}) − u_i(π_i, π_{-i}) (자기 편차는 순수 행동으로 충분)"""
    values = action_values(game, player, opponent)
    probs = _probs(strategy)
    if probs.shape != values.shape:
        raise ShapeError(f"전략 길이 {probs.size} ≠ 행동 수 {values.size}")
    return max(0.0, float(values.max() - probs @ values))


def _check_strategy(realization, strategy):
    if _probs(strategy).shape != (realization.actions,):
        raise ShapeError(f"전략 길이 {_probs(strategy).size} ≠ 행동 수 {realization.actions}")


def _worst_case_regret(realization, probs):
    best_value, best_point = 0.0, realization.belief.center
    identity = np.eye(realization.actions)
    for action in range(realization.actions):
        value, point = realization.extreme(identity[action] - probs, Sense.MAX)
        if value > best_value:
            best_value, best_point = value, point
    return max(0.0, best_value), best_point


def worst_case_regret(game, player, strategy, belief, settings=DEFAULT_SETTINGS):
    """
    신념 집합 위 후회의 최댓값: max_a max_y [u_i(a, y) − u_i(σ, y)] (최댓값 교환)
    """
    realization = realize(game, player, belief, settings)
    _check_strategy(realization, strategy)
    return _worst_case_regret(realization, _probs(strategy))


# --- 바깥 최적화 ---

def _maximin(realization):
    """max_σ min_y σ·u(y): 변수 [σ, t], t ≤ σ·U_v"""
    actions = realization.actions
    for _ in range(realization.settings.max_iter):
        columns = realization.columns
        c = np.zeros(actions + 1)
        c[-1] = -1.0
        a_ub = np.hstack([-columns.T, np.ones((columns.shape[1], 1))])
        b_ub = np.zeros(columns.shape[1])
        a_eq = np.hstack([np.ones((1, actions)), np.zeros((1, 1))])
        bounds = [(0, None)] * actions + [(None, None)]
        result = solve_lp(c, a_ub, b_ub, a_eq, [1.0], bounds, realization.settings)
        strategy = strategy_from(result.x[:actions])
        value, point = realization.extreme(strategy.probs, Sense.MIN)
        if realization.exact or value >= -result.fun - realization.tolerance * 0.1:
            return value, strategy
        realization.add(point)
    logger.warning("maximin 절단평면이 반복 상한에 도달했습니다.")
    return value, strategy


def _maximax(realization):
    identity = np.eye(realization.actions)
    best = None
    for action in range(realization.actions):
        value, _ = realization.extreme(identity[action], Sense.MAX)
        if best is None or value > best[0]:
            best = (value, action)
    return best[0], MixedStrategy.pure(realization.actions, best[1])


def _regret_rows(columns):
    """(a, v)마다 U[a,v] − σ·U_v ≤ t 제약 행"""
    actions = columns.shape[0]
    rows = np.vstack([-columns.T for _ in range(actions)])
    rhs = np.concatenate([-columns[a] for a in range(actions)])
    return rows, rhs


def _min_worst_regret(realization):
    actions = realization.actions
    for _ in range(realization.settings.max_iter):
        rows, rhs = _regret_rows(realization.columns)
        c = np.zeros(actions + 1)
        c[-1] = 1.0
        a_ub = np.hstack([rows, -np.ones((rows.shape[0], 1))])
        a_eq = np.hstack([np.ones((1, actions)), np.zeros((1, 1))])
        bounds = [(0, None)] * actions + [(None, None)]
        result = solve_lp(c, a_ub, rhs, a_eq, [1.0], bounds, realization.settings)
        strategy = strategy_from(result.x[:actions])
        value, point = _worst_case_regret(realization, strategy.probs)
        if realization.exact or value <= result.fun + realization.tolerance * 0.1:
            return value, strategy
        realization.add(point)
    logger.warning("최소 최악 후회 절단평면이 반복 상한에 도달했습니다.")
    return value, strategy


def outer_optimum(game, player, belief, notion, settings=DEFAULT_SETTINGS):
    """
    자기 단체 위 바깥 최적화

    Args:
        notion: MAXIMIN | MAXIMAX | MIN_WORST_REGRET

    Returns:
        tuple: (최적값, 최적 전략 MixedStrategy)
    """
    realization = realize(game, player, belief, settings)
    notion = OuterNotion(notion)
    if notion is OuterNotion.MAXIMIN:
        return _maximin(realization)
    if notion is OuterNotion.MAXIMAX:
        return _maximax(realization)
    return _min_worst_regret(realization)


# --- 국소 지배 ---

@dataclass(frozen=True)
class DominanceVerdict:
    """
    후보 전략이 기존 전략을 신념 집합 안에서 국소 지배하는지에 대한 판정

    - relation: STRICT | WEAK | NONE
    - witness_better: 차이가 가장 큰 신념 점 (WEAK/STRICT일 때)
    - margin: STRICT이면 최소 차이, 그 외에는 최대 차이
    """
    relation: Relation
    witness_better: tuple = None
    margin: float = 0.0
    min_margin: float = 0.0
    max_margin: float = 0.0


def _dominance(realization, candidate, incumbent, tol):
    delta = candidate - incumbent
    low, _ = realization.extreme(delta, Sense.MIN)
    high, high_point = realization.extreme(delta, Sense.MAX)
    if low > tol:
        return DominanceVerdict(Relation.STRICT, high_point, low, low, high)
    if low >= -tol and high > tol:
        return DominanceVerdict(Relation.WEAK, high_point, high, low, high)
    return DominanceVerdict(Relation.NONE, None, high, low, high)


def locally_dominates(game, player, candidate, incumbent, belief, tolerance=None, settings=DEFAULT_SETTINGS):
    realization = realize(game, player, belief, settings)
    _check_strategy(realization, candidate)
    _check_strategy(realization, incumbent)
    tol = realization.tolerance if tolerance is None else tolerance
    return _dominance(realization, _probs(candidate), _probs(incumbent), tol)


def _strict_dominator(realization, probs, tol):
    """1단계: max_σ' min_y (σ' − σ)·u(y): 양수면 엄격 지배 후보"""
    actions = realization.actions
    for _ in range(realization.settings.max_iter):
        columns = realization.columns
        offsets = probs @ columns
        c = np.zeros(actions + 1)
        c[-1] = -1.0
        a_ub = np.hstack([-columns.T, np.ones((columns.shape[1], 1))])
        a_eq = np.hstack([np.ones((1, actions)), np.zeros((1, 1))])
        bounds = [(0, None)] * actions + [(None, None)]
        result = solve_lp(c, a_ub, -offsets, a_eq, [1.0], bounds, realization.settings)
        candidate = strategy_from(result.x[:actions])
        low, point = realization.extreme(candidate.probs - probs, Sense.MIN)
        if realization.exact or low >= -result.fun - tol * 0.1:
            return low, candidate
        realization.add(point)
    return low, candidate


def _weak_dominator(realization, probs, tol):
    """2단계: (σ' − σ)·u(y) ≥ 0 ∀y 위에서 기준 열 방향 이득을 최대화"""
    actions = realization.actions
    reference = realization.reference_column()
    candidate = MixedStrategy(probs / probs.sum())
    for _ in range(realization.settings.max_iter):
        columns = realization.columns
        result = solve_lp(-reference, -columns.T, -(probs @ columns),
                          np.ones((1, actions)), [1.0], [(0, None)] * actions, realization.settings)
        candidate = strategy_from(result.x)
        low, point = realization.extreme(candidate.probs - probs, Sense.MIN)
        if realization.exact or low >= -tol:
            break
        realization.add(point)
    return _dominance(realization, candidate.probs, probs, tol), candidate


# --- 응답 분류 ---

@dataclass
class ResponseClassification:
    """
    한 플레이어 전략의 여섯 가지 응답 판정과 근거 값

    - is_W/is_B/is_WR/is_U/is_D/is_SD: 판정
    - worst_value, best_value: 신념 집합 위 최소/최대 효용
    - worst_regret: 신념 집합 위 최대 후회
    - maximin_value, maximax_value, min_worst_regret: 바깥 최적값
    - witnesses: 최적값을 달성하는 신념 점/전략, 지배 전략
    - repairs: close_verdicts가 복구한 관계 목록 (예: "D=>U"), 복구가 없으면 빈 목록
    """
    is_W: bool
    is_B: bool
    is_WR: bool
    is_U: bool
    is_D: bool
    is_SD: bool
    worst_value: float
    best_value: float
    worst_regret: float
    maximin_value: float
    maximax_value: float
    min_worst_regret: float
    tolerance: float = 0.0
    exact: bool = True
    witnesses: dict = field(default_factory=dict)
    repairs: list = field(default_factory=list)

    def __post_init__(self):
        slack = max(self.tolerance, 1e-12)
        if self.worst_value > self.best_value + slack:
            raise SolverError(f"최악값 {self.worst_value}이 최선값 {self.best_value}보다 큽니다.")
        if self.worst_regret < 0:
            raise SolverError(f"음수 후회 {self.worst_regret}")

    def verdict(self, notion):
        return getattr(self, f"is_{notion}")

    def lattice_violations(self):
        """SD ⇒ D ⇒ {W, B, WR, U} 위반 목록"""
        problems = []
        if self.is_SD and not self.is_D:
            problems.append('SD=>D')
        if self.is_D:
            problems.extend(f"D=>{n}" for n in ('W', 'B', 'WR', 'U') if not self.verdict(n))
        return problems

    def verdicts(self):
        return {n: self.verdict(n) for n in NOTIONS}


NOTIONS = ('W', 'B', 'WR', 'U', 'D', 'SD')


def _decide(realization, weights, sense, predicate):
    """
    극값에 대한 단조 임계 판정. 괄호 구간 양 끝의 판정이 같으면 반복 해법을 건너뜁니다.
    """
    bounds = realization.extreme_bounds(weights, sense)
    if bounds is not None and predicate(bounds[0]) == predicate(bounds[1]):
        return predicate(bounds[0])
    return predicate(realization.extreme(weights, sense)[0])


def dominant_verdicts(realization, probs, tol):
    """
    D: (a) 모든 순수 행동보다 어디서나 나쁘지 않고, (b) 어디서나 같은 행동 집합 E가 σ 자신뿐
    SD: σ가 순수이고 다른 모든 순수 행동보다 어디서나 엄격히 좋음

    (b) 때문에 혼합 전략은 둘 다 거짓입니다. 순수 a*에 대해 D는 다른 행동 a마다
    min (e_a* − e_a)·u ≥ −tol 이고 max > tol 인 것과 같습니다.

    Returns:
        tuple: (D 여부, SD 여부)
    """
    probs = np.asarray(probs, dtype=float)
    if probs.max() < 1.0 - 1e-12:
        return False, False
    pure = int(np.argmax(probs))
    identity = np.eye(realization.actions)
    gaps = [identity[pure] - identity[a] for a in range(realization.actions) if a != pure]
    if all(_decide(realization, w, Sense.MIN, lambda v: v > tol) for w in gaps):
        return True, True
    is_d = all(
        _decide(realization, w, Sense.MIN, lambda v: v >= -tol)
        and _decide(realization, w, Sense.MAX, lambda v: v > tol)
        for w in gaps
    )
    return is_d, False


def outer_values(realization):
    """세 가지 바깥 최적값과 최적 전략. 같은 신념 집합에서 여러 전략을 판정할 때 한 번만 계산합니다."""
    return {
        OuterNotion.MAXIMIN: _maximin(realization),
        OuterNotion.MAXIMAX: _maximax(realization),
        OuterNotion.MIN_WORST_REGRET: _min_worst_regret(realization),
    }


def _strictly_best_somewhere(realization, probs, tol):
    """순수 σ가 어떤 평가점에서 다른 모든 행동보다 tol 넘게 좋으면 참 (약한 지배자의 LP가 σ로 닫힘)"""
    if probs.max() < 1.0 - 1e-12:
        return False
    action = int(np.argmax(probs))
    others = np.delete(realization.columns, action, axis=0)
    if others.shape[0] == 0:
        return True
    return float(np.max(realization.columns[action] - others.max(axis=0))) > tol


def _find_dominator(realization, probs, tol):
    # 평가점은 모두 신념 집합 안에 있으므로 한 점에서라도 최선 응답이면 엄격 지배자가 없습니다.
    regrets = realization.columns.max(axis=0) - probs @ realization.columns
    if float(regrets.min()) > tol:
        stage_one, strict_candidate = _strict_dominator(realization, probs, tol)
        if stage_one > tol:
            return strict_candidate
    if _strictly_best_somewhere(realization, probs, tol):
        return None
    verdict, weak_candidate = _weak_dominator(realization, probs, tol)
    if verdict.relation is not Relation.NONE:
        return weak_candidate
    return None


def response_verdict(realization, strategy, notion, tolerance=None, outer=None):
    """
    한 가지 응답 개념만 판정합니다 (격자 탐색용).

    Args:
        notion: 'W' | 'B' | 'WR' | 'U' | 'D' | 'SD'
        outer: outer_values(realization) 결과 (없으면 필요한 것만 계산)
    """
    _check_strategy(realization, strategy)
    probs = _probs(strategy)
    tol = realization.tolerance if tolerance is None else tolerance
    if notion == 'W':
        maximin = outer[OuterNotion.MAXIMIN][0] if outer else _maximin(realization)[0]
        return realization.extreme(probs, Sense.MIN)[0] >= maximin - tol
    if notion == 'B':
        maximax = outer[OuterNotion.MAXIMAX][0] if outer else _maximax(realization)[0]
        return realization.extreme(probs, Sense.MAX)[0] >= maximax - tol
    if notion == 'WR':
        floor = outer[OuterNotion.MIN_WORST_REGRET][0] if outer else _min_worst_regret(realization)[0]
        return _worst_case_regret(realization, probs)[0] <= floor + tol
    if notion == 'U':
        return _find_dominator(realization, probs, tol) is None
    if notion in ('D', 'SD'):
        is_d, is_sd = dominant_verdicts(realization, probs, tol)
        return is_d if notion == 'D' else is_sd
    raise InvalidParametersError(f"알 수 없는 응답 개념 '{notion}'")


def close_verdicts(classification, player=None):
    """
    깨진 SD ⇒ D ⇒ {W, B, WR, U} 관계를 격자 쪽으로 복구하고, 복구 내역을 classification.repairs에 남깁니다.
    """
    problems = classification.lattice_violations()
    if not problems:
        return classification
    logger.warning(
        f"플레이어 {player}: 판정 관계가 깨져 복구합니다 ({', '.join(problems)}, "
        f"허용 오차 {classification.tolerance:g}, {'정확' if classification.exact else '반복'} 경로). "
        f"원래 판정: {classification.verdicts()}"
    )
    classification.repairs = list(problems)
    if classification.is_SD:
        classification.is_D = True
    for notion in ('W', 'B', 'WR', 'U'):
        setattr(classification, f"is_{notion}", True)
    return classification


def classify_realized(realization, strategy, tolerance=None, outer=None, close_lattice=True):
    _check_strategy(realization, strategy)
    probs = _probs(strategy)
    tol = realization.tolerance if tolerance is None else tolerance
    outer = outer or outer_values(realization)

    worst, worst_point = realization.extreme(probs, Sense.MIN)
    best, best_point = realization.extreme(probs, Sense.MAX)
    worst_regret_value, regret_point = _worst_case_regret(realization, probs)
    maximin, maximin_strategy = outer[OuterNotion.MAXIMIN]
    maximax, maximax_strategy = outer[OuterNotion.MAXIMAX]
    min_regret, min_regret_strategy = outer[OuterNotion.MIN_WORST_REGRET]
    dominator = _find_dominator(realization, probs, tol)
    is_d, is_sd = dominant_verdicts(realization, probs, tol)

    classification = ResponseClassification(
        is_W=worst >= maximin - tol,
        is_B=best >= maximax - tol,
        is_WR=worst_regret_value <= min_regret + tol,
        is_U=dominator is None,
        is_D=is_d,
        is_SD=is_sd,
        worst_value=worst,
        best_value=max(best, worst),
        worst_regret=worst_regret_value,
        maximin_value=maximin,
        maximax_value=maximax,
        min_worst_regret=min_regret,
        tolerance=tol,
        exact=realization.exact,
        witnesses={
            'worst_point': worst_point,
            'best_point': best_point,
            'regret_point': regret_point,
            'maximin_strategy': maximin_strategy,
            'maximax_strategy': maximax_strategy,
            'min_regret_strategy': min_regret_strategy,
            'dominator': dominator,
        },
    )
    if close_lattice:
        close_verdicts(classification, realization.player)
    return classification


def classify_response(game, player, strategy, belief, tolerance=None,
                      settings=DEFAULT_SETTINGS, close_lattice=True):
    """
    전략을 W/B/WR/U/D/SD 응답으로 분류합니다.

    Args:
        tolerance: 판정 허용 오차 (None이면 경로별 기본값)
        close_lattice: True면 수치 오차로 깨진 SD ⇒ D ⇒ {W,B,WR,U} 관계를 복구

    Returns:
        ResponseClassification
    """
    realization = realize(game, player, belief, settings)
    return classify_realized(realization, strategy, tolerance, close_lattice=close_lattice)


def best_response_actions(game, player, opponents, tol=DEFAULT_SETTINGS.tolerance):
    """중심에서의 내쉬 최선 응답 행동 집합"""
    values = action_values(game, player, opponents)
    return tuple(int(a) for a in np.flatnonzero(values >= values.max() - tol))


def is_best_response(game, player, strategy, opponents, tol=DEFAULT_SETTINGS.tolerance):
    values = action_values(game, player, opponents)
    return float(_probs(strategy) @ values) >= float(values.max()) - tol


def optimal_strategy_is_unique(game, player, belief, notion, settings=DEFAULT_SETTINGS, spread_tol=1e-6):
    """
    바깥 최적 전략이 (허용 오차 안에서) 유일한지 판정합니다.

    MAXIMIN/MIN_WORST_REGRET의 최적 집합은 다면체이므로 좌표별 최소/최대 LP로 폭을 재고,
    MAXIMAX는 최댓값을 내는 순수 행동이 하나뿐일 때만 유일합니다.

    Returns:
        tuple: (유일 여부, 최적 전략)
    """
    realization = realize(game, player, belief, settings)
    return optimum_is_unique(realization, notion, spread_tol=spread_tol)


def optimum_is_unique(realization, notion, outer=None, spread_tol=1e-6):
    """이미 만든 실현(과 outer_values 결과)으로 optimal_strategy_is_unique를 판정합니다."""
    notion = OuterNotion(notion)
    tol = realization.tolerance
    actions = realization.actions
    if notion is OuterNotion.MAXIMAX:
        identity = np.eye(actions)
        values = [realization.extreme(identity[a], Sense.MAX)[0] for a in range(actions)]
        top = max(values)
        winners = [a for a in range(actions) if values[a] >= top - tol]
        return len(winners) == 1, MixedStrategy.pure(actions, winners[0])

    if outer is not None:
        value, strategy = outer[notion]
    elif notion is OuterNotion.MAXIMIN:
        value, strategy = _maximin(realization)
    else:
        value, strategy = _min_worst_regret(realization)
    if notion is OuterNotion.MAXIMIN:
        a_ub = -realization.columns.T
        b_ub = np.full(realization.columns.shape[1], -(value - tol))
    else:
        a_ub, rhs = _regret_rows(realization.columns)
        b_ub = rhs + value + tol

    a_eq = np.ones((1, actions))
    for action in range(actions):
        direction = np.eye(actions)[action]
        low = solve_lp(direction, a_ub, b_ub, a_eq, [1.0], [(0, None)] * actions, realization.settings)
        high = solve_lp(-direction, a_ub, b_ub, a_eq, [1.0], [(0, None)] * actions, realization.settings)
        if (-high.fun) - low.fun > spread_tol:
            return False, strategy
    return True, strategy
