"""
거리 기반 균형 판정, 내쉬 기준선, ε-강건 균형, 떨리는 손 사다리, 함의 관계 감사
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .beliefs import BeliefSet, Metric, belief_for, concat, noisy_variant_vertices
from .exceptions import CapabilityError, InvalidParametersError, ShapeError
from .games import (
    MixedStrategy, Profile, action_values, check_profile, pure_profile, pure_profiles,
    random_game, simplex_grid, uniform_profile, weakly_dominated_nash_game,
)
from .responses import (
    DEFAULT_SETTINGS, NOTIONS, OuterNotion, classify_realized, dominant_verdicts,
    is_best_response, optimum_is_unique, outer_values, realize, response_verdict,
)

logger = logging.getLogger(__name__)

# 떨리는 손 사다리 기본 일정: ε_k = 2^-k, k = 1..40
DEFAULT_RUNGS = 40
# 내쉬 지지 집합 열거 허용 오차
SUPPORT_TOL = 1e-9
# 감사 검사 묶음: 판정 격자 계열(격자, 유일 증인, r=0 붕괴, SD 단조성)과 ε-강건 다리
AUDIT_SCOPES = ('lattice', 'bridge')


class Notion(Enum):
    NASH = 'nash'
    W = 'W'
    B = 'B'
    WR = 'WR'
    U = 'U'
    D = 'D'
    SD = 'SD'

    @classmethod
    def from_flag(cls, flag):
        text = str(flag)
        for notion in cls:
            if notion.value.lower() == text.lower():
                return notion
        raise InvalidParametersError(f"알 수 없는 균형 개념 '{flag}' (nash, W, B, WR, U, D, SD 중 선택)")


def normalize_radii(radii, players):
    """스칼라 반지름은 모든 플레이어에게 같은 값으로 펼칩니다."""
    if np.isscalar(radii):
        radii = [radii] * players
    radii = tuple(float(r) for r in radii)
    if len(radii) != players:
        raise ShapeError(f"반지름 벡터 길이 {len(radii)} ≠ 플레이어 수 {players}")
    if any(not math.isfinite(r) or r < 0 for r in radii):
        raise InvalidParametersError(f"반지름은 0 이상의 유한한 값이어야 합니다: {list(radii)}")
    return radii


@dataclass
class EquilibriumReport:
    """
    프로파일 하나에 대한 거리 기반 균형 판정 결과

    - flags: 개념별 균형 여부 (모든 플레이어가 해당 응답일 때 참)
    - nash: r=0 최선 응답 여부
    """
    profile: Profile
    radii: tuple
    metric: Metric
    per_player: list
    flags: dict = field(default_factory=dict)
    nash: bool = False

    def __post_init__(self):
        self.flags = {n: all(c.verdict(n) for c in self.per_player) for n in NOTIONS}
        problems = []
        if self.flags['SD'] and not self.flags['D']:
            problems.append('SD=>D')
        if self.flags['D']:
            problems.extend(f"D=>{n}" for n in ('W', 'B', 'WR', 'U') if not self.flags[n])
        self.lattice_problems = problems

    @property
    def repairs(self):
        """플레이어별 close_verdicts 복구 내역 (복구된 플레이어만)"""
        return {i: c.repairs for i, c in enumerate(self.per_player) if c.repairs}

    def holds(self, notion):
        notion = Notion.from_flag(notion) if not isinstance(notion, Notion) else notion
        if notion is Notion.NASH:
            return self.nash
        return self.flags[notion.value]


class RealizationCache:
    """
    (플레이어, 신념 중심, 반지름)마다 실현과 바깥 최적값을 한 번만 만듭니다.

    같은 게임의 여러 프로파일이 중심을 공유할 때(순수 프로파일의 상대 부분 등) 다시 풀지 않습니다.
    """

    def __init__(self, game, metric, settings=DEFAULT_SETTINGS):
        self.game = game
        self.metric = Metric(metric)
        self.settings = settings
        self._entries = {}

    def _entry(self, profile, player, radius):
        belief = belief_for(profile, player, radius, self.metric)
        key = (player, float(radius), np.round(concat(belief.center), 12).tobytes())
        if key not in self._entries:
            self._entries[key] = [realize(self.game, player, belief, self.settings), None]
        return self._entries[key]

    def realization(self, profile, player, radius):
        return self._entry(profile, player, radius)[0]

    def outer(self, profile, player, radius):
        entry = self._entry(profile, player, radius)
        if entry[1] is None:
            entry[1] = outer_values(entry[0])
        return entry[1]

    def __len__(self):
        return len(self._entries)


def verify_equilibrium(game, profile, radii, metric, tolerance=None, settings=DEFAULT_SETTINGS,
                       close_lattice=True, cache=None):
    """
    각 플레이어의 전략을 자신의 신념 집합 B_i(profile, r_i)에 대해 분류하고 균형 여부를 모읍니다.

    Args:
        cache: 같은 게임·거리로 만든 RealizationCache (여러 프로파일/반지름을 연달아 검사할 때)

    Raises:
        CapabilityError: 응답 엔진이 해당 거리/게임 조합을 풀 수 없을 때 (플레이어 표시)
    """
    check_profile(game, profile)
    radii = normalize_radii(radii, game.players)
    metric = Metric(metric)
    if cache is None or cache.metric is not metric:
        cache = RealizationCache(game, metric, settings)
    per_player = []
    for player in range(game.players):
        try:
            realization = cache.realization(profile, player, radii[player])
            outer = cache.outer(profile, player, radii[player])
            per_player.append(classify_realized(realization, profile[player], tolerance, outer, close_lattice))
        except CapabilityError as e:
            if e.player is None:
                raise CapabilityError(e.detail, player=player) from e
            raise
    nash = all(
        is_best_response(game, i, profile[i], profile.opponents(i), settings.tolerance)
        for i in range(game.players)
    )
    return EquilibriumReport(profile, radii, metric, per_player, nash=nash)


def dominant_profile(game, profile, radius, cache):
    """
    D 판정만 필요할 때: 바깥 최적화 없이 플레이어마다 지배 조건만 확인하고, 실패하면 바로 멈춥니다.
    """
    for player in range(game.players):
        realization = cache.realization(profile, player, radius)
        if not dominant_verdicts(realization, profile[player].probs, realization.tolerance)[0]:
            return False
    return True


def is_nash(game, profile, tol=DEFAULT_SETTINGS.tolerance):
    return all(is_best_response(game, i, profile[i], profile.opponents(i), tol) for i in range(game.players))


def enumerate_pure(game, radii, metric, notion, settings=DEFAULT_SETTINGS, mapper=map):
    """
    모든 순수 프로파일을 검사해 해당 개념의 균형을 사전식 순서로 반환합니다.

    Args:
        mapper: map과 같은 시그니처의 실행기 (tasks.parallel_map으로 병렬화)

    Returns:
        list[tuple]: 행동 인덱스 튜플 목록
    """
    notion = Notion.from_flag(notion) if not isinstance(notion, Notion) else notion
    radii = normalize_radii(radii, game.players)
    candidates = list(pure_profiles(game))

    def check(actions):
        profile = pure_profile(game, actions)
        if notion is Notion.NASH:
            return is_nash(game, profile, settings.tolerance)
        return verify_equilibrium(game, profile, radii, metric, settings=settings).holds(notion)

    verdicts = list(mapper(check, candidates))
    return [actions for actions, ok in zip(candidates, verdicts) if ok]


# --- 내쉬 기준선 ---

def _indifference(matrix, rows, cols):
    """
    상대 지지 집합 cols 위의 혼합 y로 rows의 행동들을 무차별하게 만드는 연립방정식을 풉니다.

    Returns:
        (y, 값, 퇴화 여부) 또는 해가 없으면 None
    """
    k, m = len(rows), len(cols)
    system = np.zeros((k + 1, m + 1))
    system[:k, :m] = matrix[np.ix_(rows, cols)]
    system[:k, m] = -1.0
    system[k, :m] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    if k == m:
        try:
            solution = np.linalg.solve(system, rhs)
            return solution[:m], float(solution[m]), False
        except np.linalg.LinAlgError:
            pass
    solution, _, rank, _ = np.linalg.lstsq(system, rhs, rcond=None)
    if np.max(np.abs(system @ solution - rhs)) > SUPPORT_TOL:
        return None
    return solution[:m], float(solution[m]), rank < m + 1


def nash_support_enumeration(game):
    """
    2인 게임의 지지 집합 쌍 열거 (무차별 조건 + 음이 아닌 해 + 지지 밖 최선 응답 확인)

    지지 집합 크기가 다른 쌍은 퇴화 게임에서만 해가 있으므로 최소제곱 해로 대표 하나를 확인합니다.

    Returns:
        list[Profile]: 중복 제거된 내쉬 균형 (완전 혼합 여부는 Profile.is_totally_mixed)
    """
    if game.players != 2:
        raise ShapeError(f"지지 집합 열거는 2인 게임만 지원합니다 (입력: {game.players}명).")
    if max(game.shape) > 5:
        raise InvalidParametersError(f"행동 수는 플레이어당 5개 이하여야 합니다 (입력: {game.shape}).")
    row_matrix, col_matrix = game.payoffs
    m, n = game.shape
    found, seen, degenerate_pairs = [], set(), 0
    for k1 in range(1, m + 1):
        for k2 in range(1, n + 1):
            for rows in itertools.combinations(range(m), k1):
                for cols in itertools.combinations(range(n), k2):
                    column_side = _indifference(row_matrix, list(rows), list(cols))
                    row_side = _indifference(col_matrix.T, list(cols), list(rows))
                    if column_side is None or row_side is None:
                        continue
                    y_support, _, deg_y = column_side
                    x_support, _, deg_x = row_side
                    if np.any(y_support < -SUPPORT_TOL) or np.any(x_support < -SUPPORT_TOL):
                        continue
                    x = np.zeros(m)
                    y = np.zeros(n)
                    x[list(rows)] = np.clip(x_support, 0.0, None)
                    y[list(cols)] = np.clip(y_support, 0.0, None)
                    x /= x.sum()
                    y /= y.sum()
                    if np.max(row_matrix @ y) > x @ row_matrix @ y + SUPPORT_TOL:
                        continue
                    if np.max(x @ col_matrix) > x @ col_matrix @ y + SUPPORT_TOL:
                        continue
                    key = tuple(np.round(np.concatenate([x, y]), 9).tolist())
                    if key in seen:
                        continue
                    seen.add(key)
                    if deg_x or deg_y:
                        degenerate_pairs += 1
                    found.append(Profile((MixedStrategy(x), MixedStrategy(y))))
    if degenerate_pairs:
        logger.warning(f"퇴화 지지 집합 쌍 {degenerate_pairs}개: 연속체 균형은 대표점만 보고합니다.")
    return found


# --- 격자 탐색 ---

@dataclass
class GridSearchResult:
    """
    격자 위 혼합 균형 후보

    - status: 'ok' | 'warning' (후보를 하나도 찾지 못함)
    """
    profiles: list
    notion: str
    resolution: float
    tolerance: float
    status: str = 'ok'

    def __iter__(self):
        return iter(self.profiles)

    def __len__(self):
        return len(self.profiles)


def grid_search_mixed(game, radii, metric, notion, resolution, tolerance=None,
                      settings=DEFAULT_SETTINGS, mapper=map):
    """
    2인 게임에서 전략 격자 곱을 훑어 격자 허용 오차 안에서 ★-응답인 프로파일을 찾습니다.

    허용 오차 기본값은 L·h (L: 최대 보수 범위, h: 해상도)입니다.
    신념 중심마다 실현과 바깥 최적값을 한 번만 만들고 그 중심의 모든 자기 전략을 판정합니다.
    """
    if game.players != 2:
        raise ShapeError(f"격자 탐색은 2인 게임만 지원합니다 (입력: {game.players}명).")
    if max(game.shape) > 3:
        raise InvalidParametersError(f"격자 탐색은 플레이어당 행동 3개 이하만 지원합니다 (입력: {game.shape}).")
    notion = Notion.from_flag(notion) if not isinstance(notion, Notion) else notion
    radii = normalize_radii(radii, 2)
    metric = Metric(metric)
    grids = [simplex_grid(size, resolution) for size in game.shape]
    tol = game.payoff_spread() * resolution if tolerance is None else float(tolerance)

    def pass_row(task):
        player, center = task
        own = grids[player]
        if notion is Notion.NASH:
            values = action_values(game, player, (center,))
            return [float(x @ values) >= float(values.max()) - tol for x in own]
        belief = BeliefSet(player, (center,), radii[player], metric)
        realization = realize(game, player, belief, settings)
        outer = outer_values(realization) if notion.value in ('W', 'B', 'WR') else None
        return [response_verdict(realization, x, notion.value, tol, outer) for x in own]

    tasks = [(0, y) for y in grids[1]] + [(1, x) for x in grids[0]]
    rows = list(mapper(pass_row, tasks))
    # pass0[iy][ix]: 중심 y에서 x가 응답인지, pass1[ix][iy]: 중심 x에서 y가 응답인지
    pass0 = rows[:len(grids[1])]
    pass1 = rows[len(grids[1]):]
    profiles = [
        Profile((MixedStrategy(x), MixedStrategy(y)))
        for ix, x in enumerate(grids[0])
        for iy, y in enumerate(grids[1])
        if pass0[iy][ix] and pass1[ix][iy]
    ]
    status = 'ok'
    if not profiles:
        status = 'warning'
        logger.warning(
            f"격자 탐색에서 {notion.value} 후보를 찾지 못했습니다 (해상도 {resolution}, 허용 오차 {tol:g}). "
            f"W/B/WR이면 존재 정리에 비추어 버그를 의심해야 합니다."
        )
    return GridSearchResult(profiles, notion.value, resolution, tol, status)


# --- ε-강건 균형 ---

@dataclass
class RobustVerdict:
    """
    순수 프로파일의 ε-강건 판정

    - witness: 실패 시 (플레이어, 잡음 변형 꼭짓점, 더 나은 행동, 이득 차이)
    """
    robust: bool
    epsilon: float
    witness: tuple = None

    def __bool__(self):
        return self.robust


def robust_check(game, profile, epsilon, tolerance=DEFAULT_SETTINGS.tolerance):
    """
    각 플레이어의 순수 행동이 상대의 모든 ε-잡음 변형에 대해 최선 응답인지 판정합니다.
    닫힌 조각 π_j(a_j) ≥ 1−ε를 쓰므로 통과 판정은 보수적입니다.
    """
    if not isinstance(profile, Profile):
        profile = pure_profile(game, profile)
    check_profile(game, profile)
    if not profile.is_pure:
        raise InvalidParametersError("ε-강건 판정에는 순수 프로파일이 필요합니다.")
    for player in range(game.players):
        action = profile[player].pure_action
        for vertex in noisy_variant_vertices(profile.opponents(player), epsilon):
            values = action_values(game, player, vertex)
            better = int(np.argmax(values))
            gap = float(values[better] - values[action])
            if gap > tolerance:
                return RobustVerdict(False, epsilon, (player, vertex, better, gap))
    return RobustVerdict(True, epsilon)


def robust_threshold(game, profile, lo=1e-6, hi=1.0 - 1e-6, precision=1e-4, tolerance=DEFAULT_SETTINGS.tolerance):
    """
    ε-강건성이 유지되는 최대 ε (잡음 변형 집합은 ε에 대해 포함 관계이므로 단조)

    Returns:
        float: 임계값 (lo에서도 실패하면 0.0, hi에서도 통과하면 hi)
    """
    if robust_check(game, profile, hi, tolerance):
        return hi
    if not robust_check(game, profile, lo, tolerance):
        return 0.0
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if robust_check(game, profile, mid, tolerance):
            lo = mid
        else:
            hi = mid
    return lo


def bridge_radius(radius, players):
    """
    순수 D_r(L2_CONCAT) ⇒ ε-강건이 보장되는 ε

    잡음 변형 집합 안의 점은 이어 붙인 벡터 기준 L2 거리가 ε·√(2(n−1)) 이하이므로
    ε = r/√(2(n−1))이면 잡음 변형 집합이 신념 집합 안에 들어갑니다 (2인 게임에서는 r/√2 = r/√n).
    """
    return radius / math.sqrt(2.0 * (players - 1))


# --- 떨리는 손 사다리 ---

class LadderVerdict(Enum):
    SUPPORTED = 'SUPPORTED'
    REFUTED = 'REFUTED'
    INCONCLUSIVE = 'INCONCLUSIVE'


@dataclass
class LadderReport:
    """
    유한 섭동 사다리 위의 최선 응답 증거 (증명이 아님)

    - families: 섭동 계열 이름 → 단계별 [플레이어별 (최선 응답, 여유, 엄격)] 목록
    - evidence: T / TP / strict_T / strict_TP 증거 플래그
    - witness: REFUTED일 때 (계열, 단계, ε, 플레이어, 여유)
    """
    profile: Profile
    schedule: list
    families: dict
    verdict: LadderVerdict
    evidence: dict
    witness: dict = None


def default_schedule(rungs=DEFAULT_RUNGS):
    return [2.0 ** -k for k in range(1, rungs + 1)]


def _perturbation_families(game):
    """
    섭동 계열: 균등 혼합, 그리고 (상대 j, 행동 b)마다 b 쪽으로 기운 완전 혼합 목표와의 혼합
    """
    families = {'uniform': None}
    for j in range(game.players):
        for b, label in enumerate(game.actions[j]):
            families[f"tilt(p{j}:{label})"] = (j, b)
    return families


def _perturbed(game, profile, epsilon, tilt):
    uniform = uniform_profile(game)
    strategies = []
    for j, strategy in enumerate(profile.strategies):
        target = uniform.strategies[j].probs
        if tilt is not None and tilt[0] == j:
            target = np.full(game.shape[j], epsilon)
            target[tilt[1]] += 1.0
            target /= target.sum()
        strategies.append((1.0 - epsilon) * strategy.probs + epsilon * target)
    return strategies


def trembling_ladder(game, profile, schedule=None, tolerance=DEFAULT_SETTINGS.tolerance):
    """
    완전 혼합 섭동 사다리에서 각 플레이어 전략이 최선 응답으로 남는지 검사합니다.

    단계 k의 허용 오차는 ε_k에 비례합니다 (max(tol·ε_k, 1e-15·보수 규모)).
    """
    check_profile(game, profile)
    schedule = list(schedule or default_schedule())
    if any(not 0.0 < eps < 1.0 for eps in schedule):
        raise InvalidParametersError("섭동 크기는 모두 (0, 1) 구간이어야 합니다.")
    scale = max(1.0, max(float(np.max(np.abs(t))) for t in game.payoffs))
    tail = schedule[-max(1, len(schedule) // 4):]
    tail_start = len(schedule) - len(tail)

    families = {}
    for name, tilt in _perturbation_families(game).items():
        rungs = []
        for epsilon in schedule:
            tol = max(tolerance * epsilon, 1e-15 * scale)
            perturbed = _perturbed(game, profile, epsilon, tilt)
            row = []
            for i in range(game.players):
                opponents = tuple(p for j, p in enumerate(perturbed) if j != i)
                values = action_values(game, i, opponents)
                own = float(profile[i].probs @ values)
                margin = own - float(values.max())
                strict = False
                action = profile[i].pure_action
                if action is not None:
                    others = np.delete(values, action)
                    strict = others.size == 0 or float(values[action] - others.max()) > tol
                row.append((margin >= -tol, margin, strict))
            rungs.append(row)
        families[name] = rungs

    def holds(rungs, start=0, key=0):
        return all(all(entry[key] for entry in row) for row in rungs[start:])

    def fails_on_tail(rungs):
        return any(all(not row[i][0] for row in rungs[tail_start:]) for i in range(game.players))

    supported = any(holds(rungs) for rungs in families.values())
    refuted = all(fails_on_tail(rungs) for rungs in families.values())
    evidence = {
        'T': supported,
        'TP': all(holds(rungs, tail_start) for rungs in families.values()),
        'strict_T': any(holds(rungs, tail_start, key=2) for rungs in families.values()),
        'strict_TP': all(holds(rungs, tail_start, key=2) for rungs in families.values()),
    }
    if supported:
        verdict = LadderVerdict.SUPPORTED
    elif refuted:
        verdict = LadderVerdict.REFUTED
    else:
        verdict = LadderVerdict.INCONCLUSIVE

    witness = None
    if verdict is LadderVerdict.REFUTED:
        rungs = families['uniform']
        for k in reversed(range(len(schedule))):
            failing = [i for i in range(game.players) if not rungs[k][i][0]]
            if failing:
                player = failing[0]
                witness = {'family': 'uniform', 'rung': k, 'epsilon': schedule[k],
                           'player': player, 'margin': rungs[k][player][1]}
                break
    return LadderReport(profile, schedule, families, verdict, evidence, witness)


# --- 2인 게임 완전 균형 판정 ---

@dataclass
class UndominatedNashVerdict:
    """
    2인 게임에서 '떨리는 손 완전 ⇔ 약하게 지배되지 않은 전략으로 이루어진 내쉬 균형' 판정

    표준 게임 이론의 특성화를 그대로 가져온 판정입니다.
    """
    nash: bool
    undominated: list
    perfect: bool


def undominated_nash_check(game, profile, settings=DEFAULT_SETTINGS):
    if game.players != 2:
        raise ShapeError("완전 균형 특성화 판정은 2인 게임에서만 정확합니다.")
    check_profile(game, profile)
    nash = is_nash(game, profile, settings.tolerance)
    undominated = []
    for player in range(2):
        # 반지름 1의 LINF 공은 상대 단체 전체
        belief = BeliefSet(player, profile.opponents(player), 1.0, Metric.LINF_PRODUCT)
        realization = realize(game, player, belief, settings)
        undominated.append(response_verdict(realization, profile[player], 'U'))
    return UndominatedNashVerdict(nash, undominated, nash and all(undominated))


# --- 함의 관계 감사 ---

@dataclass
class AuditReport:
    """
    무작위 게임 위 함의 관계 감사 결과

    - checks: 검사 종류별 실행 횟수
    - violations: 재현 정보를 담은 위반 목록 (기대값: 빈 목록)
    - witness: 약하게 지배되는 순수 내쉬 균형의 비함의 예시 결과
    - scope: 실행한 검사 묶음 (AUDIT_SCOPES)
    """
    seed: int
    num_games: int
    shape: tuple
    radii: tuple
    metric: Metric
    checks: dict
    violations: list
    witness: dict = None
    scope: tuple = AUDIT_SCOPES

    @property
    def violation_count(self):
        return len(self.violations)


def _random_profile(game, rng):
    return Profile(tuple(MixedStrategy(rng.dirichlet(np.ones(size))) for size in game.shape))


def _violation(check, index, game, profile, radius, player=None, detail=''):
    return {
        'check': check,
        'game_index': index,
        'payoffs': [t.reshape(-1).tolist() for t in game.payoffs],
        'shape': list(game.shape),
        'profile': profile.as_lists(),
        'radius': radius,
        'player': player,
        'detail': detail,
    }


def audit_game(index, seed_sequence, shape, radii_set, metric, settings=DEFAULT_SETTINGS, scope=AUDIT_SCOPES):
    """
    무작위 게임 하나에 대해 결정 가능한 모든 함의 관계를 검사합니다.

    플레이어마다 (중심, 반지름)별 실현을 한 번만 만들어 격자, 유일 증인, r=0 붕괴, SD 단조성,
    다리 검사가 함께 씁니다.

    Args:
        scope: AUDIT_SCOPES의 부분 집합 ('lattice': 판정 격자 계열, 'bridge': ε-강건 다리)

    Returns:
        tuple: (검사 횟수 dict, 위반 목록)
    """
    rng = np.random.default_rng(seed_sequence)
    game = random_game(shape, rng)
    metric = Metric(metric)
    checks = {}
    violations = []

    def count(name):
        checks[name] = checks.get(name, 0) + 1

    profiles = [pure_profile(game, actions) for actions in pure_profiles(game)]
    profiles.append(_random_profile(game, rng))
    radii = sorted(set(float(r) for r in radii_set) | {0.0})

    if 'lattice' in scope:
        cache = RealizationCache(game, metric, settings)
        for profile in profiles:
            violations.extend(_lattice_violations(index, game, profile, radii, cache, count))
    if 'bridge' in scope:
        l2_cache = RealizationCache(game, Metric.L2_CONCAT, settings)
        for profile in profiles:
            if not profile.is_pure:
                continue
            for radius in radii:
                if 0.0 < radius < 1.0:
                    violations.extend(_bridge_violations(index, game, profile, radius, l2_cache, count))
    return checks, violations


def _lattice_violations(index, game, profile, radii, cache, count):
    """SD ⇒ D ⇒ {W,B,WR,U}, 유일 증인 ⇒ U, r=0 붕괴, 반지름에 대한 SD 단조성"""
    found = []
    sd_by_radius = []
    for radius in radii:
        report = verify_equilibrium(game, profile, radius, cache.metric, settings=cache.settings,
                                    close_lattice=False, cache=cache)
        for player, classification in enumerate(report.per_player):
            count('lattice')
            for problem in classification.lattice_violations():
                found.append(_violation('lattice', index, game, profile, radius, player, problem))
            for notion, outer in (('W', OuterNotion.MAXIMIN), ('B', OuterNotion.MAXIMAX),
                                  ('WR', OuterNotion.MIN_WORST_REGRET)):
                if classification.verdict(notion) and not classification.is_U:
                    count('unique_implies_U')
                    unique, _ = optimum_is_unique(cache.realization(profile, player, radius), outer,
                                                  cache.outer(profile, player, radius))
                    if unique:
                        found.append(_violation('unique_implies_U', index, game, profile, radius,
                                                player, f"unique {notion} but not U"))
        count('equilibrium_lattice')
        for problem in report.lattice_problems:
            found.append(_violation('equilibrium_lattice', index, game, profile, radius, None, problem))
        if radius == 0.0:
            count('collapse')
            for player, classification in enumerate(report.per_player):
                mismatch = _collapse_mismatch(game, profile, player, classification, cache.settings)
                if mismatch:
                    found.append(_violation('collapse', index, game, profile, 0.0, player, mismatch))
        sd_by_radius.append(report.flags['SD'])
    count('sd_monotone')
    for k in range(1, len(sd_by_radius)):
        if sd_by_radius[k] and not sd_by_radius[k - 1]:
            found.append(_violation('sd_monotone', index, game, profile, radii[k], None,
                                    f"SD at r={radii[k]} but not at r={radii[k - 1]}"))
            break
    return found


def _collapse_mismatch(game, profile, player, classification, settings):
    """r=0에서 W/B/WR/U는 최선 응답, D는 유일 최선 응답, SD는 엄격 최선 응답과 같아야 합니다."""
    tol = settings.tolerance
    values = action_values(game, player, profile.opponents(player))
    top = float(values.max())
    best = float(profile[player].probs @ values) >= top - tol
    action = profile[player].pure_action
    winners = np.flatnonzero(values >= top - tol)
    unique = action is not None and best and winners.size == 1
    strict = unique and (values.size == 1 or float(values[action] - np.delete(values, action).max()) > tol)
    expected = {'W': best, 'B': best, 'WR': best, 'U': best, 'D': unique, 'SD': strict}
    wrong = [n for n, v in expected.items() if classification.verdict(n) != v]
    return f"r=0 불일치: {wrong}" if wrong else ''


def _bridge_violations(index, game, profile, radius, l2_cache, count):
    """ε-강건 ⇒ D_ε (L2_CONCAT), 순수 D_r ⇒ bridge_radius(r)-강건"""
    found = []
    settings = l2_cache.settings
    robust = robust_check(game, profile, radius, settings.tolerance)
    d_flag = dominant_profile(game, profile, radius, l2_cache)
    count('robust_implies_D')
    if robust and not d_flag and _generic(game, profile, settings):
        found.append(_violation('robust_implies_D', index, game, profile, radius, None,
                                f"{radius}-강건이지만 D_{radius}가 아님"))
    if d_flag:
        count('D_implies_robust')
        epsilon = bridge_radius(radius, game.players)
        verdict = robust_check(game, profile, epsilon, settings.tolerance)
        if not verdict:
            found.append(_violation('D_implies_robust', index, game, profile, radius, verdict.witness[0],
                                    f"D_{radius}이지만 {epsilon:.6g}-강건이 아님"))
    return found


def _generic(game, profile, settings):
    """어떤 플레이어에게도 균형 행동과 어디서나 같은 다른 행동이 없으면 참 (상수 게임 등 배제)"""
    for player in range(game.players):
        action = profile[player].pure_action
        tensor = np.moveaxis(game.payoffs[player], player, 0)
        for other in range(game.shape[player]):
            if other != action and np.allclose(tensor[other], tensor[action], atol=settings.tolerance):
                return False
    return True


def non_entailment_witness(radius=0.1, metric=Metric.LINF_PRODUCT, settings=DEFAULT_SETTINGS):
    """약하게 지배되는 순수 내쉬 균형은 r=0에서 균형이지만 r>0에서 U_r이 아닙니다."""
    game = weakly_dominated_nash_game()
    profile = pure_profile(game, (1, 1))
    at_zero = verify_equilibrium(game, profile, 0.0, metric, settings=settings)
    at_radius = verify_equilibrium(game, profile, radius, metric, settings=settings)
    return {
        'game': game.name,
        'profile': profile.as_lists(),
        'radius': radius,
        'nash': at_zero.nash,
        'U_at_zero': at_zero.flags['U'],
        'U_at_radius': at_radius.flags['U'],
        'confirmed': at_zero.nash and not at_radius.flags['U'],
    }


def implication_audit(seed, num_games, shape, radii_set, metric, settings=DEFAULT_SETTINGS, mapper=map,
                      scope=AUDIT_SCOPES):
    """
    시드 고정 무작위 게임 위에서 함의 관계를 감사합니다. 게임마다 SeedSequence에서 갈라진 생성기를 쓰므로
    mapper가 게임을 어떤 순서로 실행해도 결과가 같습니다.

    Args:
        shape: 플레이어별 행동 수 (n ∈ {2, 3}, 행동 ≤ 3)
        mapper: 게임 단위 실행기 (tasks.parallel_map 또는 진행 기록 실행기)
        scope: 실행할 검사 묶음 (AUDIT_SCOPES의 부분 집합)
    """
    shape = tuple(int(s) for s in shape)
    if not 2 <= len(shape) <= 3 or any(not 1 <= s <= 3 for s in shape):
        raise InvalidParametersError(f"감사 게임 모양은 2~3인, 플레이어당 행동 1~3개여야 합니다 (입력: {shape}).")
    unknown = set(scope) - set(AUDIT_SCOPES)
    if unknown or not scope:
        raise InvalidParametersError(f"감사 범위는 {', '.join(AUDIT_SCOPES)} 중에서 골라야 합니다 (입력: {list(scope)}).")
    scope = tuple(s for s in AUDIT_SCOPES if s in set(scope))
    metric = Metric(metric)
    children = np.random.SeedSequence(seed).spawn(num_games)

    def unit(index):
        return audit_game(index, children[index], shape, radii_set, metric, settings, scope)

    checks, violations = {}, []
    for game_checks, game_violations in mapper(unit, range(num_games)):
        for name, n in game_checks.items():
            checks[name] = checks.get(name, 0) + n
        violations.extend(game_violations)
    witness = non_entailment_witness(settings=settings)
    if not witness['confirmed']:
        violations.append({'check': 'non_entailment_witness', 'detail': witness})
    if violations:
        logger.warning(f"함의 관계 감사에서 위반 {len(violations)}건이 발견되었습니다.")
    return AuditReport(seed, num_games, shape, tuple(sorted(set(radii_set))), metric, checks, violations,
                       witness, scope)
