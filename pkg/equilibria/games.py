import itertools
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import GameParseError, InvalidParametersError, ShapeError

logger = logging.getLogger(__name__)

# 혼합 전략 확률 합 허용 오차
PROB_SUM_TOL = 1e-12

# 상대 하위 프로파일: i를 제외한 플레이어 순서대로의 확률 벡터 튜플
SubProfile = tuple


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """
    한 플레이어의 행동 위 확률 분포

    - probs: 행동별 확률 (읽기 전용 numpy 배열)
    - 모든 원소 ≥ 0, 합은 1 (오차 1e-12 이내)
    """
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if probs.size == 0:
            raise ShapeError("혼합 전략에는 최소 1개의 행동이 필요합니다.")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise InvalidParametersError(f"확률은 0 이상의 유한한 값이어야 합니다: {probs.tolist()}")
        if abs(probs.sum() - 1.0) > PROB_SUM_TOL:
            raise InvalidParametersError(f"확률의 합이 1이 아닙니다 (합계 {probs.sum():.15g}).")
        probs.setflags(write=False)
        object.__setattr__(self, 'probs', probs)

    @classmethod
    def pure(cls, size, action):
        probs = np.zeros(size)
        probs[action] = 1.0
        return cls(probs)

    @classmethod
    def uniform(cls, size):
        return cls(np.full(size, 1.0 / size))

    def __len__(self):
        return self.probs.size

    def __eq__(self, other):
        return isinstance(other, MixedStrategy) and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash(self.probs.tobytes())

    def support(self):
        return tuple(int(a) for a in np.flatnonzero(self.probs > 0))

    @property
    def is_totally_mixed(self):
        return len(self.support()) == self.probs.size

    @property
    def pure_action(self):
        """순수 전략이면 해당 행동 인덱스, 아니면 None"""
        best = int(np.argmax(self.probs))
        if self.probs[best] >= 1.0 - PROB_SUM_TOL:
            return best
        return None

    @property
    def is_pure(self):
        return self.pure_action is not None


@dataclass(frozen=True, eq=False)
class Game:
    """
    n인 정규형 게임

    - actions: 플레이어별 행동 라벨 튜플
    - payoffs: 플레이어별 보수 텐서 (모양 |A_1|×…×|A_n|)
    - name, description: 표시용 메타데이터
    """
    actions: tuple
    payoffs: tuple
    name: str = ''
    description: str = ''

    def __post_init__(self):
        actions = tuple(tuple(str(label) for label in labels) for labels in self.actions)
        if len(actions) < 2:
            raise ShapeError(f"플레이어는 2명 이상이어야 합니다 (입력: {len(actions)}명).")
        for i, labels in enumerate(actions):
            if len(labels) < 1:
                raise ShapeError(f"플레이어 {i}의 행동이 없습니다.")
            if len(set(labels)) != len(labels):
                raise ShapeError(f"플레이어 {i}의 행동 라벨이 중복됩니다: {list(labels)}")
        shape = tuple(len(labels) for labels in actions)
        if len(self.payoffs) != len(actions):
            raise ShapeError(f"보수 텐서 수({len(self.payoffs)})가 플레이어 수({len(actions)})와 다릅니다.")
        tensors = []
        for i, tensor in enumerate(self.payoffs):
            array = np.array(tensor, dtype=float)
            if array.shape != shape:
                raise ShapeError(f"플레이어 {i}의 보수 텐서 모양 {array.shape} ≠ {shape}")
            if not np.all(np.isfinite(array)):
                raise ShapeError(f"플레이어 {i}의 보수에 유한하지 않은 값이 있습니다.")
            array.setflags(write=False)
            tensors.append(array)
        object.__setattr__(self, 'actions', actions)
        object.__setattr__(self, 'payoffs', tuple(tensors))

    @property
    def players(self):
        return len(self.actions)

    @property
    def shape(self):
        return tuple(len(labels) for labels in self.actions)

    def payoff_spread(self):
        """플레이어별 보수 범위(max − min) 중 최댓값. 격자 오라클의 립시츠 상수로 쓰인다."""
        return max(float(t.max() - t.min()) for t in self.payoffs)

    def structurally_equal(self, other):
        return (
            self.actions == other.actions
            and self.name == other.name
            and self.description == other.description
            and all(np.array_equal(a, b) for a, b in zip(self.payoffs, other.payoffs))
        )


@dataclass(frozen=True, eq=False)
class Profile:
    """플레이어별 혼합 전략의 묶음"""
    strategies: tuple

    def __post_init__(self):
        strategies = tuple(
            s if isinstance(s, MixedStrategy) else MixedStrategy(s) for s in self.strategies
        )
        object.__setattr__(self, 'strategies', strategies)

    def __len__(self):
        return len(self.strategies)

    def __getitem__(self, player):
        return self.strategies[player]

    def __eq__(self, other):
        return isinstance(other, Profile) and self.strategies == other.strategies

    def __hash__(self):
        return hash(self.strategies)

    def opponents(self, player):
        """π_{-i}: 플레이어 i를 제외한 확률 벡터들의 튜플"""
        return tuple(s.probs for j, s in enumerate(self.strategies) if j != player)

    def replace(self, player, strategy):
        strategies = list(self.strategies)
        strategies[player] = strategy if isinstance(strategy, MixedStrategy) else MixedStrategy(strategy)
        return Profile(tuple(strategies))

    @property
    def is_pure(self):
        return all(s.is_pure for s in self.strategies)

    @property
    def pure_actions(self):
        return tuple(s.pure_action for s in self.strategies)

    @property
    def is_totally_mixed(self):
        return all(s.is_totally_mixed for s in self.strategies)

    def as_lists(self):
        return [s.probs.tolist() for s in self.strategies]


def check_profile(game, profile):
    if len(profile) != game.players:
        raise ShapeError(f"프로파일 길이 {len(profile)} ≠ 플레이어 수 {game.players}")
    for i, (strategy, size) in enumerate(zip(profile.strategies, game.shape)):
        if len(strategy) != size:
            raise ShapeError(f"플레이어 {i}의 전략 길이 {len(strategy)} ≠ 행동 수 {size}")


def check_opponents(game, player, opponents):
    if not 0 <= player < game.players:
        raise ShapeError(f"플레이어 인덱스 {player}가 범위를 벗어났습니다.")
    others = [j for j in range(game.players) if j != player]
    if len(opponents) != len(others):
        raise ShapeError(f"상대 하위 프로파일 길이 {len(opponents)} ≠ {len(others)}")
    for j, vector in zip(others, opponents):
        if np.shape(vector) != (game.shape[j],):
            raise ShapeError(f"플레이어 {j}의 확률 벡터 모양 {np.shape(vector)} ≠ ({game.shape[j]},)")


def action_values(game, player, opponents):
    """
    상대 하위 프로파일에 대한 플레이어 i의 순수 행동별 기대 보수

    Args:
        game: Game
        player: 플레이어 인덱스 i
        opponents: π_{-i} (플레이어 순서대로의 확률 벡터 튜플)

    Returns:
        np.ndarray: 길이 |A_i|의 벡터, 원소 a는 u_i(a, π_{-i})
    """
    check_opponents(game, player, opponents)
    tensor = game.payoffs[player]
    others = [j for j in range(game.players) if j != player]
    # 뒤쪽 축부터 축약해야 앞쪽 축 번호가 유지된다
    for j, vector in reversed(list(zip(others, opponents))):
        tensor = np.tensordot(tensor, np.asarray(vector, dtype=float), axes=([j], [0]))
    return tensor


def expected_utility(game, profile, player):
    """u_i(π) = Σ_a u_i(a) ∏_j π_j(a_j), 전체 텐서 축약으로 계산"""
    check_profile(game, profile)
    if not 0 <= player < game.players:
        raise ShapeError(f"플레이어 인덱스 {player}가 범위를 벗어났습니다.")
    tensor = game.payoffs[player]
    for j in reversed(range(game.players)):
        tensor = np.tensordot(tensor, profile[j].probs, axes=([j], [0]))
    return float(tensor)


def social_welfare(game, profile):
    return float(sum(expected_utility(game, profile, i) for i in range(game.players)))


def pure_profiles(game):
    """모든 순수 프로파일을 행동 인덱스의 사전식 순서로 생성"""
    return itertools.product(*(range(size) for size in game.shape))


def pure_profile(game, actions):
    if len(actions) != game.players:
        raise ShapeError(f"순수 프로파일 길이 {len(actions)} ≠ 플레이어 수 {game.players}")
    return Profile(tuple(MixedStrategy.pure(size, a) for size, a in zip(game.shape, actions)))


def uniform_profile(game):
    return Profile(tuple(MixedStrategy.uniform(size) for size in game.shape))


def grid_steps(resolution):
    """해상도 h를 정수 분할 수 1/h로 변환 (1/h가 정수가 아니면 거부)"""
    if not 0.0 < resolution <= 0.25:
        raise InvalidParametersError(f"해상도는 (0, 0.25] 구간이어야 합니다 (입력: {resolution}).")
    steps = round(1.0 / resolution)
    if abs(steps * resolution - 1.0) > 1e-9:
        raise InvalidParametersError(f"1/해상도가 정수가 아닙니다 (입력: {resolution}).")
    return steps


def simplex_grid(size, resolution):
    """합이 1/h인 음이 아닌 정수 조합으로 만든 단체 위 무게중심 격자"""
    steps = grid_steps(resolution)
    points = []
    for combo in itertools.product(range(steps + 1), repeat=size - 1):
        rest = steps - sum(combo)
        if rest >= 0:
            points.append(np.array(combo + (rest,), dtype=float) / steps)
    return points


def pure_welfare(game, actions):
    return float(sum(t[tuple(actions)] for t in game.payoffs))


# --- 게임 문서(JSON) 입출력 ---

def _reject_constant(token):
    raise ValueError(f"허용되지 않는 숫자 리터럴: {token}")


def parse_game(doc, source=None):
    """
    JSON 게임 문서를 Game으로 변환합니다.

    스키마: {"name": str?, "description": str?, "players": int,
             "actions": [[str,...],...], "payoffs": [[real,...],...]}
    payoffs[i]는 플레이어 i의 텐서를 행 우선(마지막 플레이어 인덱스가 가장 빠르게 변함)으로 편 것입니다.
    """
    try:
        data = json.loads(doc, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise GameParseError(e.msg, line=e.lineno, source=source) from e
    except ValueError as e:
        raise GameParseError(str(e), field='payoffs', source=source) from e

    if not isinstance(data, dict):
        raise GameParseError("최상위 값은 객체여야 합니다.", source=source)

    players = data.get('players')
    if isinstance(players, bool) or not isinstance(players, int) or players < 2:
        raise GameParseError("players는 2 이상의 정수여야 합니다.", field='players', source=source)

    actions = data.get('actions')
    if not isinstance(actions, list) or len(actions) != players:
        raise GameParseError(f"actions는 길이 {players}의 리스트여야 합니다.", field='actions', source=source)
    for i, labels in enumerate(actions):
        if not isinstance(labels, list) or not labels or not all(isinstance(x, str) for x in labels):
            raise GameParseError("행동 라벨은 비어 있지 않은 문자열 리스트여야 합니다.",
                                 field=f'actions[{i}]', source=source)
        if len(set(labels)) != len(labels):
            raise GameParseError(f"행동 라벨이 중복됩니다: {labels}", field=f'actions[{i}]', source=source)

    shape = tuple(len(labels) for labels in actions)
    expected = math.prod(shape)
    payoffs = data.get('payoffs')
    if not isinstance(payoffs, list) or len(payoffs) != players:
        raise GameParseError(f"payoffs는 길이 {players}의 리스트여야 합니다.", field='payoffs', source=source)

    tensors = []
    for i, flat in enumerate(payoffs):
        field = f'payoffs[{i}]'
        if not isinstance(flat, list):
            raise GameParseError("보수는 숫자 리스트여야 합니다.", field=field, source=source)
        if len(flat) != expected:
            raise GameParseError(f"텐서 길이 {len(flat)} ≠ ∏|A_i| = {expected}", field=field, source=source)
        for k, value in enumerate(flat):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise GameParseError(f"숫자가 아닌 보수: {value!r}", field=f'{field}[{k}]', source=source)
            if not math.isfinite(value):
                raise GameParseError("유한하지 않은 보수", field=f'{field}[{k}]', source=source)
        tensors.append(np.array(flat, dtype=float).reshape(shape))

    name = data.get('name', '')
    description = data.get('description', '')
    if not isinstance(name, str) or not isinstance(description, str):
        raise GameParseError("name/description은 문자열이어야 합니다.", field='name', source=source)

    return Game(actions=tuple(tuple(labels) for labels in actions), payoffs=tuple(tensors),
                name=name, description=description)


def serialize_game(game):
    doc = {}
    if game.name:
        doc['name'] = game.name
    if game.description:
        doc['description'] = game.description
    doc['players'] = game.players
    doc['actions'] = [list(labels) for labels in game.actions]
    doc['payoffs'] = [tensor.reshape(-1).tolist() for tensor in game.payoffs]
    return json.dumps(doc, indent=2, ensure_ascii=False)


def load_game(path):
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise GameParseError(f"파일을 읽을 수 없습니다: {e}", source=str(path)) from e
    return parse_game(text, source=str(path))


def dump_game(game, path):
    Path(path).write_text(serialize_game(game) + '\n', encoding='utf-8')


# --- 프로파일 리터럴 ---

def parse_profile(text, game):
    """
    "p0:0.5,0.5;p1:1,0" 형식의 프로파일 리터럴을 해석합니다.
    확률 대신 행동 라벨 하나를 적으면 순수 전략으로 취급합니다 (예: "p0:Up;p1:Left").
    """
    entries = {}
    for chunk in filter(None, (part.strip() for part in text.split(';'))):
        key, sep, body = chunk.partition(':')
        key = key.strip()
        if not sep or not key.startswith('p') or not key[1:].isdigit():
            raise GameParseError(f"'{chunk}' 항목은 'p<번호>:<확률,...>' 형식이어야 합니다.", field='profile')
        player = int(key[1:])
        if player >= game.players:
            raise GameParseError(f"플레이어 {player}가 존재하지 않습니다.", field='profile')
        if player in entries:
            raise GameParseError(f"플레이어 {player}가 두 번 지정되었습니다.", field='profile')
        body = body.strip()
        if body in game.actions[player]:
            entries[player] = MixedStrategy.pure(game.shape[player], game.actions[player].index(body))
            continue
        try:
            probs = [float(x) for x in body.split(',')]
        except ValueError as e:
            raise GameParseError(f"확률을 해석할 수 없습니다: '{body}'", field=f'p{player}') from e
        if len(probs) != game.shape[player]:
            raise GameParseError(f"확률 개수 {len(probs)} ≠ 행동 수 {game.shape[player]}", field=f'p{player}')
        try:
            entries[player] = MixedStrategy(probs)
        except InvalidParametersError as e:
            raise GameParseError(e.detail, field=f'p{player}') from e
    missing = [i for i in range(game.players) if i not in entries]
    if missing:
        raise GameParseError(f"플레이어 {missing}의 전략이 없습니다.", field='profile')
    return Profile(tuple(entries[i] for i in range(game.players)))


def format_profile(profile):
    return ';'.join(
        f"p{i}:" + ','.join(f"{p:.6g}" for p in s.probs) for i, s in enumerate(profile.strategies)
    )


# --- 예제 게임 ---

def _bimatrix(name, row_actions, col_actions, row_payoffs, col_payoffs, description=''):
    return Game(actions=(tuple(row_actions), tuple(col_actions)),
                payoffs=(np.array(row_payoffs, dtype=float), np.array(col_payoffs, dtype=float)),
                name=name, description=description)


def trembling_hand_game():
    # (Up,Left)=(1,1), (Up,Right)=(2,0), (Down,Left)=(0,2), (Down,Right)=(2,2)
    return _bimatrix('trembling-hand', ('Up', 'Down'), ('Left', 'Right'),
                     [[1, 2], [0, 2]], [[1, 0], [2, 2]],
                     '두 순수 내쉬 균형 중 (Up,Left)만 떨리는 손 완전 균형인 게임')


def matching_pennies():
    return _bimatrix('matching-pennies', ('Heads', 'Tails'), ('Heads', 'Tails'),
                     [[1, -1], [-1, 1]], [[-1, 1], [1, -1]])


def stag_hunt():
    return _bimatrix('stag-hunt', ('Stag', 'Hare'), ('Stag', 'Hare'),
                     [[5, -1], [3, 1]], [[5, 3], [-1, 1]])


def prisoners_dilemma():
    return _bimatrix('prisoners-dilemma', ('Cooperate', 'Defect'), ('Cooperate', 'Defect'),
                     [[3, 0], [5, 1]], [[3, 5], [0, 1]])


def weakly_dominated_nash_game():
    """(Down,Right)가 내쉬 균형이지만 Down이 Up에 약하게 지배되는 게임"""
    return _bimatrix('weakly-dominated-nash', ('Up', 'Down'), ('Left', 'Right'),
                     [[1, 1], [0, 1]], [[1, 0], [0, 1]])


def constant_game(shape, value=1.0):
    shape = tuple(shape)
    actions = tuple(tuple(f"a{k}" for k in range(size)) for size in shape)
    return Game(actions=actions, payoffs=tuple(np.full(shape, float(value)) for _ in shape),
                name=f"constant-{value:g}")


def random_game(shape, rng, low=0.0, high=1.0):
    """각 보수를 [low, high) 균등분포에서 뽑은 랜덤 게임"""
    shape = tuple(shape)
    actions = tuple(tuple(f"a{k}" for k in range(size)) for size in shape)
    payoffs = tuple(rng.uniform(low, high, size=shape) for _ in shape)
    return Game(actions=actions, payoffs=payoffs, name='random')


def scaled(game, alpha=1.0, beta=0.0):
    """u_i → α·u_i + β (α > 0)"""
    if alpha <= 0:
        raise InvalidParametersError(f"α는 양수여야 합니다 (입력: {alpha}).")
    return Game(actions=game.actions, payoffs=tuple(alpha * t + beta for t in game.payoffs),
                name=game.name, description=game.description)


def shifted(game, beta):
    return scaled(game, 1.0, beta)


EXAMPLE_GAMES = {
    'trembling': trembling_hand_game,
    'pennies': matching_pennies,
    'staghunt': stag_hunt,
    'prisoners': prisoners_dilemma,
    'weakly-dominated': weakly_dominated_nash_game,
}
