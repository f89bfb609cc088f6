"""
격자 이산화 기반 브루트포스 오라클

응답 엔진과 해법 코드를 공유하지 않습니다 (선형 계획법 없이 격자 위 전수 합산).
판정 허용 오차 기본값은 L·h (L: 최대 보수 범위, h: 해상도)입니다.
"""
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .beliefs import Metric, belief_for, contains, distance
from .exceptions import InvalidParametersError, NonMonotoneError, OracleCostError, ShapeError
from .games import Profile, check_profile, grid_steps, simplex_grid
from .responses import NOTIONS, ResponseClassification

logger = logging.getLogger(__name__)

# 자기 전략 격자를 나누어 평가하는 묶음 크기
CHUNK = 2048


@dataclass(frozen=True)
class GridSpec:
    """
    - resolution: 격자 간격 h ∈ (0, 0.25], 1/h는 정수
    - tolerance: 판정 허용 오차 (None이면 L·h)
    - max_cells: 자기 격자 점 수 × 신념 격자 점 수 상한
    """
    resolution: float
    tolerance: float = None
    max_cells: int = 30_000_000

    def __post_init__(self):
        grid_steps(self.resolution)

    def tolerance_for(self, game):
        if self.tolerance is not None:
            return float(self.tolerance)
        return game.payoff_spread() * self.resolution


def _check_scope(game):
    if game.players > 3 or max(game.shape) > 3:
        raise InvalidParametersError(
            f"오라클은 3인 이하, 플레이어당 행동 3개 이하의 게임만 지원합니다 (입력: {game.shape})."
        )


def ball_grid(belief, resolution, own_points, max_cells):
    """
    신념 집합 안의 격자 점 (중심은 항상 포함)

    상대별 격자를 블록 거리로 먼저 거른 뒤 곱을 만들고 contains()로 최종 확인합니다.
    """
    if belief.radius == 0.0:
        return [belief.center]
    blocks = []
    for center in belief.center:
        candidates = simplex_grid(center.size, resolution)
        blocks.append([y for y in candidates if distance(belief.metric, (center,), (y,)) <= belief.radius + 1e-12])
    estimate = int(np.prod([len(b) for b in blocks]))
    if own_points * estimate > max_cells:
        raise OracleCostError(own_points, estimate, max_cells)
    points = [belief.center]
    for combo in itertools.product(*blocks):
        if contains(belief, combo):
            points.append(tuple(combo))
    return points


def _axis_sum(tensor, vector):
    """축 1을 vector로 합산 (축 0은 자기 행동)"""
    return np.einsum('ab...,b->a...', tensor, vector)


def _values_table(game, player, points):
    tensor = np.moveaxis(game.payoffs[player], player, 0)
    columns = []
    for point in points:
        weighted = tensor
        for vector in point:
            weighted = _axis_sum(weighted, np.asarray(vector, dtype=float))
        columns.append(weighted)
    return np.stack(columns, axis=1)


@dataclass
class _GridReduction:
    maximin: float = -np.inf
    maximax: float = -np.inf
    min_regret: float = np.inf
    strict_gain: float = -np.inf
    weak_found: bool = False
    witnesses: dict = field(default_factory=dict)


def oracle_classify(game, player, strategy, belief, grid, mapper=map):
    """
    자기 격자 × 신념 격자 전수 평가로 여섯 가지 응답을 판정합니다.

    Returns:
        ResponseClassification (exact=False, tolerance = 격자 허용 오차)
    """
    _check_scope(game)
    probs = strategy.probs if hasattr(strategy, 'probs') else np.asarray(strategy, dtype=float)
    if probs.shape != (game.shape[player],):
        raise ShapeError(f"전략 길이 {probs.size} ≠ 행동 수 {game.shape[player]}")
    tol = grid.tolerance_for(game)
    own = np.array(simplex_grid(game.shape[player], grid.resolution))
    points = ball_grid(belief, grid.resolution, len(own), grid.max_cells)
    pure = _values_table(game, player, points)
    sigma_row = probs @ pure
    best_pure = pure.max(axis=0)

    def reduce_chunk(start):
        block = own[start:start + CHUNK]
        utilities = block @ pure
        worst = utilities.min(axis=1)
        best = utilities.max(axis=1)
        regrets = (best_pure[None, :] - utilities).max(axis=1)
        gains = utilities - sigma_row[None, :]
        low = gains.min(axis=1)
        high = gains.max(axis=1)
        weak = (low >= -tol) & (high > tol)
        return {
            'maximin': (float(worst.max()), block[int(worst.argmax())]),
            'maximax': (float(best.max()), block[int(best.argmax())]),
            'min_regret': (float(regrets.min()), block[int(regrets.argmin())]),
            'strict': (float(low.max()), block[int(low.argmax())]),
            'weak': block[int(np.flatnonzero(weak)[0])] if weak.any() else None,
        }

    result = _GridReduction()
    for part in mapper(reduce_chunk, range(0, len(own), CHUNK)):
        if part['maximin'][0] > result.maximin:
            result.maximin, result.witnesses['maximin_strategy'] = part['maximin']
        if part['maximax'][0] > result.maximax:
            result.maximax, result.witnesses['maximax_strategy'] = part['maximax']
        if part['min_regret'][0] < result.min_regret:
            result.min_regret, result.witnesses['min_regret_strategy'] = part['min_regret']
        if part['strict'][0] > result.strict_gain:
            result.strict_gain = part['strict'][0]
            if result.strict_gain > tol:
                result.witnesses['dominator'] = part['strict'][1]
        if part['weak'] is not None and not result.weak_found:
            result.weak_found = True
            result.witnesses.setdefault('dominator', part['weak'])

    worst_sigma = float(sigma_row.min())
    best_sigma = float(sigma_row.max())
    regret_sigma = max(0.0, float((best_pure - sigma_row).max()))

    gaps = sigma_row[None, :] - pure
    gap_low = gaps.min(axis=1)
    gap_high = gaps.max(axis=1)
    action = int(np.argmax(probs)) if probs.max() >= 1.0 - 1e-12 else None
    is_d = is_sd = False
    if action is not None:
        others = [a for a in range(len(probs)) if a != action]
        ties = [a for a in others if abs(gap_low[a]) <= tol and abs(gap_high[a]) <= tol]
        is_d = bool(np.all(gap_low >= -tol)) and not ties
        is_sd = all(gap_low[a] > tol for a in others)

    return ResponseClassification(
        is_W=worst_sigma >= result.maximin - tol,
        is_B=best_sigma >= result.maximax - tol,
        is_WR=regret_sigma <= result.min_regret + tol,
        is_U=not (result.strict_gain > tol or result.weak_found),
        is_D=is_d,
        is_SD=is_sd,
        worst_value=worst_sigma,
        best_value=best_sigma,
        worst_regret=regret_sigma,
        maximin_value=result.maximin,
        maximax_value=result.maximax,
        min_worst_regret=result.min_regret,
        tolerance=tol,
        exact=False,
        witnesses=dict(result.witnesses, points=len(points), own_points=len(own)),
    )


@dataclass
class OracleReport:
    profile: Profile
    radii: tuple
    metric: Metric
    per_player: list
    flags: dict
    tolerance: float


def oracle_verify(game, profile, radii, metric, grid, mapper=map):
    """오라클 판정을 플레이어별로 모아 개념별 균형 여부를 만듭니다."""
    _check_scope(game)
    check_profile(game, profile)
    if np.isscalar(radii):
        radii = [radii] * game.players
    radii = tuple(float(r) for r in radii)
    if len(radii) != game.players:
        raise ShapeError(f"반지름 벡터 길이 {len(radii)} ≠ 플레이어 수 {game.players}")
    metric = Metric(metric)
    per_player = [
        oracle_classify(game, i, profile[i], belief_for(profile, i, radii[i], metric), grid, mapper)
        for i in range(game.players)
    ]
    flags = {n: all(c.verdict(n) for c in per_player) for n in NOTIONS}
    return OracleReport(profile, radii, metric, per_player, flags, grid.tolerance_for(game))


@dataclass
class ThresholdResult:
    """
    - value: 판정이 참으로 남는 최대 반지름 (정밀도 precision)
    - note: 구간 양 끝이 같은 판정일 때의 설명
    - probes: (반지름, 판정) 탐색 기록
    """
    value: float
    notion: str
    lo: float
    hi: float
    note: str = ''
    probes: list = field(default_factory=list)


def oracle_threshold(game, profile, notion, lo, hi, metric, grid, precision=1e-4, checkpoints=9, mapper=map):
    """
    "profile이 ★_r 균형이다"가 참에서 거짓으로 바뀌는 반지름을 이분 탐색합니다.

    Raises:
        NonMonotoneError: 표본 반지름에서 거짓 다음에 참이 나오면 두 점을 보고
    """
    if not 0.0 <= lo < hi:
        raise InvalidParametersError(f"0 ≤ lo < hi 이어야 합니다 (lo={lo}, hi={hi}).")
    notion = str(notion)
    if notion not in NOTIONS:
        raise InvalidParametersError(f"오라클 임계값은 {', '.join(NOTIONS)} 중 하나여야 합니다 (입력: {notion}).")
    probes = []

    def claim(radius):
        verdict = oracle_verify(game, profile, radius, metric, grid, mapper).flags[notion]
        probes.append((radius, verdict))
        return verdict

    samples = [(float(r), claim(float(r))) for r in np.linspace(lo, hi, checkpoints)]
    for (earlier, v_early), (later, v_late) in itertools.combinations(samples, 2):
        if not v_early and v_late:
            raise NonMonotoneError(earlier, later)

    if samples[-1][1]:
        return ThresholdResult(hi, notion, lo, hi, '구간 양 끝에서 모두 참이므로 hi를 반환합니다.', probes)
    if not samples[0][1]:
        return ThresholdResult(lo, notion, lo, hi, '구간 양 끝에서 모두 거짓이므로 lo를 반환합니다.', probes)

    low = max(r for r, v in samples if v)
    high = min(r for r, v in samples if not v)
    while high - low > precision:
        mid = 0.5 * (low + high)
        if claim(mid):
            low = mid
        else:
            high = mid
    return ThresholdResult(low, notion, lo, hi, '', probes)
