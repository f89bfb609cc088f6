"""
사회 후생 분석: 무정부 비용(PoA), 합의 게임, δ_G(r) 추정, 평활성 (λ, μ) 적합과 PoA 하한 검증
"""
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .beliefs import BeliefSet, Metric, pure_subprofiles, sample_points
from .equilibrium import Notion, enumerate_pure, grid_search_mixed, normalize_radii
from .exceptions import (
    CapabilityError, InvalidParametersError, NotConsensusGameError, PositivityError,
)
from .games import Game, action_values, pure_profile, pure_profiles, pure_welfare, social_welfare
from .responses import DEFAULT_SETTINGS, Sense, realize, solve_lp

logger = logging.getLogger(__name__)

# 평활성 적합에서 μ의 탐색 상한
MU_CAP = 1e3
# 평활성 제약 잔차 허용 오차
RESIDUAL_TOL = 1e-9
# 정확한 내부 해법을 쓸 수 없는 중심에서 사용할 표본 수
FALLBACK_POINTS = 64


# --- PoA ---

@dataclass
class PoAReport:
    """
    - status: 'ok' | 'undefined' (균형 집합이 비었거나 최소 후생이 0 이하)
    - equilibrium_set: [(프로파일, 후생)] 목록
    """
    max_sw: float
    equilibrium_set: list
    poa: float = None
    status: str = 'ok'
    notion: str = ''
    radii: tuple = ()
    note: str = ''


def poa(game, equilibrium_set, notion='', radii=(), candidates=()):
    """
    PoA = 최대 사회 후생 / 균형 집합의 최소 사회 후생

    Args:
        equilibrium_set: Profile 또는 순수 행동 튜플 목록
        candidates: 최대 후생 계산에 추가할 혼합 프로파일
    """
    def as_profile(item):
        return item if not isinstance(item, tuple) else pure_profile(game, item)

    max_sw = max(pure_welfare(game, actions) for actions in pure_profiles(game))
    for profile in candidates:
        max_sw = max(max_sw, social_welfare(game, as_profile(profile)))
    members = [(as_profile(item), social_welfare(game, as_profile(item))) for item in equilibrium_set]
    report = PoAReport(max_sw, members, notion=str(notion), radii=tuple(radii))
    if not members:
        report.status = 'undefined'
        report.note = '균형 집합이 비어 있어 PoA가 정의되지 않습니다.'
        return report
    worst = min(sw for _, sw in members)
    if worst <= 0:
        report.status = 'undefined'
        report.note = f'균형의 최소 사회 후생이 양수가 아닙니다 ({worst:g}).'
        return report
    report.poa = max_sw / worst
    return report


# --- 합의 게임 ---

def consensus_generate(players, actions_per_player, c, c_prime, consensus_profile=None):
    """
    합의 프로파일에서만 모두 c'을 받고 나머지 순수 프로파일에서는 모두 c를 받는 게임
    """
    if players < 2:
        raise InvalidParametersError(f"플레이어는 2명 이상이어야 합니다 (입력: {players}).")
    if np.isscalar(actions_per_player):
        actions_per_player = [int(actions_per_player)] * players
    shape = tuple(int(k) for k in actions_per_player)
    if len(shape) != players or any(k < 2 for k in shape):
        raise InvalidParametersError(f"플레이어마다 2개 이상의 행동이 필요합니다 (입력: {list(shape)}).")
    if not c_prime > c:
        raise InvalidParametersError(f"c' > c 이어야 합니다 (c={c}, c'={c_prime}).")
    consensus = tuple(consensus_profile) if consensus_profile is not None else (0,) * players
    if len(consensus) != players or any(not 0 <= a < k for a, k in zip(consensus, shape)):
        raise InvalidParametersError(f"합의 프로파일 {list(consensus)}이 게임 모양 {list(shape)}과 맞지 않습니다.")
    tensor = np.full(shape, float(c))
    tensor[consensus] = float(c_prime)
    actions = tuple(tuple(f"a{k}" for k in range(size)) for size in shape)
    return Game(actions=actions, payoffs=tuple(tensor.copy() for _ in shape),
                name=f"consensus-{players}p", description=f"c={c:g}, c'={c_prime:g}, 합의={list(consensus)}")


def is_consensus_game(game):
    """
    Returns:
        tuple: (c, c', 합의 행동 튜플), 합의 게임이 아니면 None
    """
    first = game.payoffs[0]
    if any(not np.array_equal(first, t) for t in game.payoffs[1:]):
        return None
    values = np.unique(first)
    if values.size != 2:
        return None
    low, high = float(values[0]), float(values[1])
    top = np.argwhere(first == high)
    if len(top) != 1:
        return None
    return low, high, tuple(int(a) for a in top[0])


@dataclass
class ConsensusAudit:
    c: float
    c_prime: float
    consensus: tuple
    radii: tuple
    d_set: list
    unique: bool
    mixed_found: list
    poa_d: PoAReport
    poa_nash: PoAReport
    passed: bool = False


def consensus_audit(game, radii, metric, settings=DEFAULT_SETTINGS, resolution=0.05, mapper=map):
    """
    합의 게임의 유일한 D_r 균형이 합의 프로파일이고 그 PoA가 1인지 검증합니다.
    혼합 D_r 격자 검사는 2인 게임에서만 수행합니다.
    """
    detected = is_consensus_game(game)
    if detected is None:
        raise NotConsensusGameError("모든 플레이어의 보수가 같고 한 프로파일만 c'을 주는 형태여야 합니다.")
    c, c_prime, consensus = detected
    radii = normalize_radii(radii, game.players)
    if any(r <= 0 for r in radii):
        raise InvalidParametersError(f"합의 게임 검증에는 모든 r_i > 0이 필요합니다: {list(radii)}")

    d_set = enumerate_pure(game, radii, metric, Notion.D, settings, mapper)
    unique = d_set == [consensus]
    mixed_found = []
    if game.players == 2 and max(game.shape) <= 3:
        grid = grid_search_mixed(game, radii, metric, Notion.D, resolution,
                                 tolerance=settings.tolerance, settings=settings, mapper=mapper)
        mixed_found = [p for p in grid.profiles if p.pure_actions != consensus]
    poa_d = poa(game, d_set, Notion.D.value, radii)
    nash_set = enumerate_pure(game, 0.0, metric, Notion.NASH, settings, mapper)
    poa_nash = poa(game, nash_set, Notion.NASH.value, (0.0,) * game.players)
    passed = unique and not mixed_found and poa_d.status == 'ok' and poa_d.poa == 1.0
    if not passed:
        logger.warning(f"합의 게임 검증 실패: D 집합 {d_set}, 격자 혼합 후보 {len(mixed_found)}개")
    return ConsensusAudit(c, c_prime, consensus, radii, d_set, unique, mixed_found, poa_d, poa_nash, passed)


# --- δ_G(r) ---

@dataclass
class DeltaEstimate:
    """
    - lower_estimate: 표본 중심에서 얻은 δ_G(r)의 하한 추정
    - upper_bound: 전역 최대/최소 보수 비 (r=0이면 1)
    - witness: 최대 비를 만든 (플레이어, 행동, 중심, 점)
    """
    lower_estimate: float
    upper_bound: float
    radius: float
    metric: Metric
    samples: int
    seed: int
    witness: dict = field(default_factory=dict)


def check_positive(game):
    low = min(float(t.min()) for t in game.payoffs)
    if low <= 0:
        raise PositivityError(low)
    return low


def delta_upper_bound(game, radius):
    """δ_G(r)의 건전한 상한: r=0이면 1, 아니면 전역 최대 보수 / 최소 보수"""
    low = check_positive(game)
    if radius == 0.0:
        return 1.0
    return max(float(t.max()) for t in game.payoffs) / low


def _centers(game, player, samples, rng):
    """모든 순수 중심 + 디리클레 표본 중심 (r과 무관하게 같은 난수열)"""
    sizes = tuple(size for j, size in enumerate(game.shape) if j != player)
    centers = list(pure_subprofiles(sizes))
    for _ in range(samples):
        centers.append(tuple(rng.dirichlet(np.ones(size)) for size in sizes))
    return centers


def _action_extremes(game, player, belief, settings, rng):
    """행동마다 ((공 위 최솟값, 점), (최댓값, 점)). 정확한 해법이 없으면 공 안 표본으로 대신합니다."""
    identity = np.eye(game.shape[player])
    try:
        realization = realize(game, player, belief, settings)
        return [(realization.extreme(w, Sense.MIN), realization.extreme(w, Sense.MAX)) for w in identity]
    except CapabilityError:
        points = list(sample_points(belief, FALLBACK_POINTS, rng)) + [belief.center]
        table = np.array([action_values(game, player, p) for p in points])
        result = []
        for action in range(game.shape[player]):
            lo, hi = int(np.argmin(table[:, action])), int(np.argmax(table[:, action]))
            result.append(((float(table[lo, action]), points[lo]), (float(table[hi, action]), points[hi])))
        return result


def delta_estimate(game, radius, metric, samples=None, seed=0, settings=DEFAULT_SETTINGS):
    """
    δ_G(r) = max over (i, a_i, 중심, 공 안의 점) of max{u/u', u'/u}

    중심마다 u_i(a_i, ·)의 공 위 최솟값/최댓값을 정확히 풀어 비를 계산합니다.
    반지름이 달라도 같은 seed면 같은 중심을 쓰므로 추정값은 r에 대해 비감소입니다.
    """
    check_positive(game)
    metric = Metric(metric)
    radius = float(radius)
    samples = 1000 if samples is None else int(samples)
    if samples < 0:
        raise InvalidParametersError(f"표본 수는 0 이상이어야 합니다 (입력: {samples}).")
    if radius == 0.0:
        return DeltaEstimate(1.0, 1.0, radius, metric, samples, seed)
    upper = delta_upper_bound(game, radius)

    best, witness = 1.0, {}
    children = np.random.SeedSequence(seed).spawn(2 * game.players)
    for player in range(game.players):
        center_rng = np.random.default_rng(children[2 * player])
        fallback_rng = np.random.default_rng(children[2 * player + 1])
        for center in _centers(game, player, samples, center_rng):
            belief = BeliefSet(player, center, radius, metric)
            values = action_values(game, player, center)
            extremes = _action_extremes(game, player, belief, settings, fallback_rng)
            for action, ((low, low_point), (high, high_point)) in enumerate(extremes):
                base = float(values[action])
                for ratio, point in ((base / low, low_point), (high / base, high_point)):
                    if ratio > best:
                        best = ratio
                        witness = {'player': player, 'action': action,
                                   'center': [v.tolist() for v in center],
                                   'point': [np.asarray(v).tolist() for v in point]}
    return DeltaEstimate(min(best, upper), upper, radius, metric, samples, seed, witness)


# --- 평활성 ---

@dataclass
class SmoothnessCertificate:
    """
    (λ, μ)-평활성 인증서

    - delta: 반지름을 함께 주면 DeltaEstimate, 아니면 None (δ = 1)
    - bound: λ/(δ_upper² + μ), classical_bound: λ/(1 + μ)
    - binding_pair: 제약이 가장 빡빡한 순수 (a, a') 쌍
    """
    lambda_: float
    mu: float
    delta: DeltaEstimate
    bound: float
    classical_bound: float
    binding_pair: tuple
    min_residual: float


def _pair_table(game):
    """순수 쌍마다 (SW(a), SW(a'), Σ_i u_i(a'_i, a_{-i}))"""
    profiles = list(pure_profiles(game))
    rows = []
    for a, a_prime in itertools.product(profiles, repeat=2):
        deviation = sum(
            float(game.payoffs[i][tuple(a_prime[i] if j == i else a[j] for j in range(game.players))])
            for i in range(game.players)
        )
        rows.append((a, a_prime, pure_welfare(game, a), pure_welfare(game, a_prime), deviation))
    return rows


def smoothness_residuals(game, lambda_, mu):
    """
    잔차 Σ_i u_i(a'_i, a_{-i}) − λ·SW(a') + μ·SW(a)의 최솟값과 그 쌍

    Returns:
        tuple: (최소 잔차, (a, a'))
    """
    worst = None
    for a, a_prime, sw, sw_prime, deviation in _pair_table(game):
        residual = deviation - lambda_ * sw_prime + mu * sw
        if worst is None or residual < worst[0]:
            worst = (residual, (a, a_prime))
    return worst


def _smoothness_lp(table, t, settings, objective):
    """변수 [λ, μ]: λ·SW(a') − μ·SW(a) ≤ D(a,a'), −λ + t·μ ≤ −t"""
    a_ub = [[sw_prime, -sw] for _, _, sw, sw_prime, _ in table]
    b_ub = [deviation for *_, deviation in table]
    a_ub.append([-1.0, t])
    b_ub.append(-t)
    return solve_lp(objective, np.array(a_ub), np.array(b_ub), bounds=[(0, None), (0, MU_CAP)],
                    settings=settings, allow_infeasible=True)


def smoothness_fit(game, radius=0.0, metric=Metric.LINF_PRODUCT, samples=None, seed=0,
                   settings=DEFAULT_SETTINGS, precision=1e-9):
    """
    순수 쌍 제약 아래 λ/(1+μ)를 최대화하는 (λ, μ)를 찾습니다.

    목표값 t에 대한 실행 가능성 {λ ≥ t(1+μ)}이 선형이므로 t를 이분 탐색하고,
    최적 t에서 μ가 가장 작은 쌍을 고릅니다.
    μ = 0도 허용합니다.

    Returns:
        SmoothnessCertificate, 인증서가 없으면 None
    """
    if min(float(t.min()) for t in game.payoffs) < 0:
        raise InvalidParametersError("평활성 적합에는 0 이상의 보수가 필요합니다.")
    table = _pair_table(game)
    if max(sw for _, _, sw, _, _ in table) <= 0:
        raise InvalidParametersError("사회 후생이 양수인 프로파일이 하나 이상 필요합니다.")

    zero = np.zeros(2)
    lo, hi = 0.0, 1.0
    if _smoothness_lp(table, hi, settings, zero) is not None:
        lo = hi
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if _smoothness_lp(table, mid, settings, zero) is not None:
            lo = mid
        else:
            hi = mid
    if lo <= 0.0:
        logger.warning("λ > 0인 평활성 인증서가 없습니다.")
        return None

    least_mu = _smoothness_lp(table, lo, settings, np.array([0.0, 1.0]))
    if least_mu is None:
        return None
    mu = float(least_mu.x[1])
    # μ를 고정한 뒤 λ를 최대화
    a_ub = np.array([[sw_prime] for _, _, sw, sw_prime, _ in table])
    b_ub = np.array([deviation + mu * sw for _, _, sw, _, deviation in table])
    best_lambda = solve_lp([-1.0], a_ub, b_ub, bounds=[(0, None)], settings=settings)
    lambda_ = float(best_lambda.x[0])

    delta = None
    delta_upper = 1.0
    if radius > 0:
        delta = delta_estimate(game, radius, metric, samples, seed, settings)
        delta_upper = delta.upper_bound
    min_residual, pair = smoothness_residuals(game, lambda_, mu)
    if min_residual < -RESIDUAL_TOL:
        logger.warning(f"평활성 인증서 잔차가 음수입니다: {min_residual:g}")
    return SmoothnessCertificate(
        lambda_=lambda_,
        mu=mu,
        delta=delta,
        bound=lambda_ / (delta_upper ** 2 + mu),
        classical_bound=lambda_ / (1.0 + mu),
        binding_pair=pair,
        min_residual=min_residual,
    )


@dataclass
class PoABoundCheck:
    notion: str
    radii: tuple
    certificate: SmoothnessCertificate
    delta_upper: float
    bound: float
    equilibria: list
    min_slack: float = None
    violations: list = field(default_factory=list)


def poa_bound_check(game, radii, metric, notion, settings=DEFAULT_SETTINGS, mapper=map):
    """
    모든 순수 ★_r 균형 a*와 모든 순수 a'에 대해 SW(a*)/SW(a') ≥ λ/(δ_upper² + μ) − 1e-9를 확인합니다.
    δ는 전역 상한을 쓰므로 표본 누락과 무관하게 건전합니다.
    """
    notion = Notion.from_flag(notion) if not isinstance(notion, Notion) else notion
    if notion not in (Notion.U, Notion.D, Notion.W, Notion.B):
        raise InvalidParametersError(f"PoA 하한 검증은 U, D, W, B 개념만 지원합니다 (입력: {notion.value}).")
    check_positive(game)
    radii = normalize_radii(radii, game.players)
    certificate = smoothness_fit(game, settings=settings)
    if certificate is None:
        raise InvalidParametersError("평활성 인증서가 없어 PoA 하한을 검증할 수 없습니다.")
    delta_upper = delta_upper_bound(game, max(radii))
    bound = certificate.lambda_ / (delta_upper ** 2 + certificate.mu)
    equilibria = enumerate_pure(game, radii, metric, notion, settings, mapper)
    report = PoABoundCheck(notion.value, radii, certificate, delta_upper, bound, equilibria)
    for star in equilibria:
        for other in pure_profiles(game):
            slack = pure_welfare(game, star) / pure_welfare(game, other) - bound
            if report.min_slack is None or slack < report.min_slack:
                report.min_slack = slack
            if slack < -RESIDUAL_TOL:
                report.violations.append({'equilibrium': list(star), 'other': list(other), 'slack': slack})
    if report.violations:
        logger.warning(f"PoA 하한 위반 {len(report.violations)}건 ({notion.value}, r={list(radii)})")
    return report
