"""
분석 명령 실행과 보고서 조립/출력

관리 명령과 Celery 작업은 모두 run_verb()를 통해 라이브러리를 호출합니다.
수치 계산은 이 모듈에 두지 않습니다.
"""
import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field, is_dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from django.conf import settings

from .beliefs import Metric
from .equilibrium import (
    AUDIT_SCOPES, Notion, enumerate_pure, grid_search_mixed, implication_audit, nash_support_enumeration,
    normalize_radii, robust_check, robust_threshold, trembling_ladder, default_schedule,
    undominated_nash_check, verify_equilibrium,
)
from .exceptions import GameParseError, InvalidParametersError
from .games import (
    EXAMPLE_GAMES, Game, MixedStrategy, Profile, dump_game, format_profile, load_game, parse_profile,
    pure_welfare, social_welfare,
)
from .oracle import GridSpec, oracle_threshold, oracle_verify
from .responses import NOTIONS, SolverSettings
from .welfare import (
    RESIDUAL_TOL, consensus_audit, consensus_generate, delta_estimate, poa, poa_bound_check,
    smoothness_fit, smoothness_residuals,
)

logger = logging.getLogger(__name__)

REPORT_SCHEMA = 'dbeq/1'
OUTPUT_FORMATS = ('json', 'table', 'csv')
FLOAT_DIGITS = 12

# 명령별 허용 파라미터 (그 밖의 파라미터는 거부)
VERB_PARAMS = {
    'verify': {'profile', 'expect'},
    'enumerate': {'notion', 'supports'},
    'search': {'notion', 'resolution'},
    'robust': {'profile', 'epsilon', 'threshold'},
    'ladder': {'profile', 'rungs'},
    'audit': {'num_games', 'shape', 'radii_set', 'scope'},
    'oracle': {'profile', 'resolution', 'claim_notion', 'lo', 'hi', 'precision'},
    'poa': {'notion', 'samples'},
    'delta': {'samples'},
    'smoothness': {'samples'},
    'consensus': {'players', 'actions', 'c', 'c_prime', 'consensus_profile', 'save_game',
                  'smooth_lambda', 'smooth_mu'},
    'sweep': {'notion', 'profile', 'r_grid'},
}
VERBS = tuple(VERB_PARAMS)
# 게임 파일 없이 실행할 수 있는 명령
GAMELESS_VERBS = ('audit', 'consensus')

# 예제 게임에 대해 알려진 임계값 주장: (게임 이름, 개념, 순수 프로파일) → 주장된 반지름
# 계산값과 다르면 문서화된 불일치로 기록합니다.
REFERENCE_CLAIMS = {
    ('stag-hunt', 'W', (1, 1)): 1.0 / 3.0,
}


@dataclass
class RunConfig:
    """
    분석 실행 설정

    - game: 게임 파일 경로 또는 예제 이름 (trembling, pennies, staghunt, ...)
    - radii: 스칼라 또는 플레이어별 반지름 목록 (None이면 명령별 기본값)
    - params: 명령별 파라미터 (VERB_PARAMS 참고)
    """
    verb: str
    game: str = None
    metric: str = None
    radii: object = None
    tolerance: float = None
    output_format: str = 'json'
    seed: int = 0
    params: dict = field(default_factory=dict)

    def validate(self):
        if self.verb not in VERB_PARAMS:
            raise InvalidParametersError(f"알 수 없는 명령 '{self.verb}' ({', '.join(VERBS)} 중 선택)")
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidParametersError(f"--format은 {', '.join(OUTPUT_FORMATS)} 중 하나여야 합니다.")
        if self.game is None and self.verb not in GAMELESS_VERBS:
            raise InvalidParametersError(f"'{self.verb}' 명령에는 게임 파일 경로가 필요합니다.")
        Metric.from_flag(self.metric_flag)
        if self.tolerance is not None and not self.tolerance > 0:
            raise InvalidParametersError(f"--tol은 양수여야 합니다 (입력: {self.tolerance}).")
        if self.radii is not None and self.verb == 'audit':
            raise InvalidParametersError("'audit' 명령은 --r/--r-vec 대신 --radii로 반지름 목록을 받습니다.")
        if self.radii is not None:
            values = [self.radii] if np.isscalar(self.radii) else list(self.radii)
            if any(not math.isfinite(float(r)) or float(r) < 0 for r in values):
                raise InvalidParametersError(f"--r/--r-vec은 0 이상의 유한한 값이어야 합니다: {values}")
        unknown = sorted(set(self.params) - VERB_PARAMS[self.verb])
        if unknown:
            flags = ', '.join('--' + name.replace('_', '-') for name in unknown)
            owners = sorted({v for v, names in VERB_PARAMS.items() for n in unknown if n in names})
            raise InvalidParametersError(
                f"{flags} 옵션은 '{self.verb}' 명령에서 사용할 수 없습니다 (사용 가능: {', '.join(owners) or '없음'})."
            )
        return self

    @property
    def metric_flag(self):
        return self.metric or getattr(settings, 'DBEQ_DEFAULT_METRIC', 'l2')

    def param(self, name, default=None):
        value = self.params.get(name)
        return default if value is None else value

    def as_dict(self):
        return {
            'verb': self.verb,
            'game': self.game,
            'metric': self.metric_flag,
            'radii': list(self.radii) if self.radii is not None and not np.isscalar(self.radii) else self.radii,
            'tolerance': self.tolerance,
            'output_format': self.output_format,
            'seed': self.seed,
            'params': {k: v for k, v in sorted(self.params.items()) if v is not None},
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            verb=data['verb'],
            game=data.get('game'),
            metric=data.get('metric'),
            radii=data.get('radii'),
            tolerance=data.get('tolerance'),
            output_format=data.get('output_format', 'json'),
            seed=data.get('seed', 0),
            params=dict(data.get('params') or {}),
        )


@dataclass
class RunResult:
    """
    - report: 보고서 문서 (JSON 직렬화 가능)
    - columns, rows: table/csv 출력용 행
    - negative: 단정형 명령의 부정적 분석 결과 (종료 코드 1)
    """
    report: dict
    columns: list
    rows: list
    negative: bool = False
    summary: str = ''

    @property
    def exit_code(self):
        return 1 if self.negative else 0


# --- 입력 해석 ---

def resolve_game(source):
    """게임 파일 경로 또는 예제 이름을 Game으로 만듭니다."""
    path = Path(source)
    if path.is_file():
        return load_game(path)
    if source in EXAMPLE_GAMES:
        return EXAMPLE_GAMES[source]()
    raise GameParseError(
        f"게임 파일을 찾을 수 없습니다 (예제 이름: {', '.join(sorted(EXAMPLE_GAMES))}).", source=str(source)
    )


def parse_radii_vector(text):
    try:
        return [float(x) for x in str(text).split(',') if x.strip()]
    except ValueError as e:
        raise InvalidParametersError(f"--r-vec은 콤마로 구분한 숫자여야 합니다 (입력: {text}).") from e


def parse_float_list(text, flag):
    try:
        return [float(x) for x in str(text).split(',') if x.strip()]
    except ValueError as e:
        raise InvalidParametersError(f"{flag}은 콤마로 구분한 숫자여야 합니다 (입력: {text}).") from e


def parse_shape(text):
    """'2x3' → (2, 3)"""
    try:
        shape = tuple(int(x) for x in str(text).lower().split('x'))
    except ValueError as e:
        raise InvalidParametersError(f"--shape은 '2x2'처럼 행동 수를 x로 이어 적어야 합니다 (입력: {text}).") from e
    return shape


def parse_r_grid(text):
    """'lo:hi:step' → 양 끝을 포함한 반지름 목록"""
    try:
        lo, hi, step = (float(x) for x in str(text).split(':'))
    except ValueError as e:
        raise InvalidParametersError(f"--r-grid는 'lo:hi:step' 형식이어야 합니다 (입력: {text}).") from e
    if not (0.0 <= lo <= hi and step > 0):
        raise InvalidParametersError(f"--r-grid는 0 ≤ lo ≤ hi, step > 0 이어야 합니다 (입력: {text}).")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, FLOAT_DIGITS) for k in range(count)]


def _notion(config, default='nash'):
    return Notion.from_flag(config.param('notion', default))


def _radii(config, game, default=0.0):
    radii = default if config.radii is None else config.radii
    return normalize_radii(radii, game.players)


def _profile(config, game, required=True):
    text = config.param('profile')
    if text is None:
        if required:
            raise InvalidParametersError(f"'{config.verb}' 명령에는 --profile이 필요합니다.")
        return None
    return parse_profile(text, game)


def _action_labels(game, actions):
    return [game.actions[i][a] for i, a in enumerate(actions)]


def _pure_entry(game, actions):
    return {'actions': list(actions), 'labels': _action_labels(game, actions),
            'welfare': pure_welfare(game, actions)}


def _profile_entry(game, profile):
    return {'profile': profile.as_lists(), 'text': format_profile(profile),
            'welfare': social_welfare(game, profile)}


def _reference_claim(game, notion, profile):
    if profile is None or not profile.is_pure:
        return None
    return REFERENCE_CLAIMS.get((game.name, notion, profile.pure_actions))


# --- 명령별 실행 ---

def _run_verify(config, game, solver, mapper):
    profile = _profile(config, game)
    radii = _radii(config, game)
    metric = Metric.from_flag(config.metric_flag)
    report = verify_equilibrium(game, profile, radii, metric, settings=solver)
    flags = dict(report.flags, nash=report.nash)
    players = []
    for i, c in enumerate(report.per_player):
        players.append(dict(
            c.verdicts(), player=i, worst_value=c.worst_value, best_value=c.best_value,
            worst_regret=c.worst_regret, maximin_value=c.maximin_value, maximax_value=c.maximax_value,
            min_worst_regret=c.min_worst_regret, tolerance=c.tolerance, exact=c.exact,
            lattice_repairs=c.repairs,
        ))
    body = {
        'profile': profile.as_lists(),
        'profile_text': format_profile(profile),
        'radii': list(radii),
        'metric': metric.value,
        'flags': flags,
        'players': players,
        'lattice_problems': report.lattice_problems,
        'lattice_repairs': {str(i): r for i, r in report.repairs.items()},
    }
    negative, summary = False, ''
    expect = config.param('expect')
    if expect:
        wanted = [Notion.from_flag(n.strip()) for n in str(expect).split(',') if n.strip()]
        body['expectation'] = {n.value: report.holds(n) for n in wanted}
        missing = [n for n, ok in body['expectation'].items() if not ok]
        if missing:
            negative = True
            summary = f"기대한 균형 개념이 성립하지 않습니다: {', '.join(missing)}"
    columns = ['player', *NOTIONS, 'worst_value', 'best_value', 'worst_regret']
    rows = [{k: p[k] for k in columns} for p in players]
    rows.append(dict({'player': 'all'}, **{n: flags[n] for n in NOTIONS}))
    return body, columns, rows, negative, summary


def _run_enumerate(config, game, solver, mapper):
    notion = _notion(config)
    radii = _radii(config, game)
    metric = Metric.from_flag(config.metric_flag)
    found = enumerate_pure(game, radii, metric, notion, solver, mapper)
    body = {
        'notion': notion.value,
        'radii': list(radii),
        'metric': metric.value,
        'equilibria': [_pure_entry(game, actions) for actions in found],
        'count': len(found),
    }
    if config.param('supports'):
        mixed = nash_support_enumeration(game)
        body['support_enumeration'] = [
            dict(_profile_entry(game, p), totally_mixed=p.is_totally_mixed) for p in mixed
        ]
    columns = ['actions', 'labels', 'welfare']
    rows = [{'actions': ' '.join(map(str, e['actions'])), 'labels': ' '.join(e['labels']),
             'welfare': e['welfare']} for e in body['equilibria']]
    return body, columns, rows, False, ''


def _run_search(config, game, solver, mapper):
    notion = _notion(config, 'W')
    radii = _radii(config, game)
    metric = Metric.from_flag(config.metric_flag)
    resolution = float(config.param('resolution', 0.05))
    result = grid_search_mixed(game, radii, metric, notion, resolution, config.tolerance, solver, mapper)
    body = {
        'notion': result.notion,
        'radii': list(radii),
        'metric': metric.value,
        'resolution': resolution,
        'tolerance': result.tolerance,
        'status': result.status,
        'count': len(result),
        'profiles': [_profile_entry(game, p) for p in result],
    }
    columns = ['text', 'welfare']
    rows = [{'text': e['text'], 'welfare': e['welfare']} for e in body['profiles']]
    return body, columns, rows, False, ''


def _run_robust(config, game, solver, mapper):
    profile = _profile(config, game)
    epsilon = config.param('epsilon')
    if epsilon is None:
        raise InvalidParametersError("'robust' 명령에는 --epsilon이 필요합니다.")
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise InvalidParametersError(f"--epsilon은 (0, 1) 구간이어야 합니다 (입력: {epsilon}).")
    verdict = robust_check(game, profile, epsilon, solver.tolerance)
    body = {
        'profile': profile.as_lists(),
        'profile_text': format_profile(profile),
        'epsilon': epsilon,
        'robust': verdict.robust,
        'witness': None,
    }
    if verdict.witness is not None:
        player, vertex, better, gap = verdict.witness
        body['witness'] = {'player': player, 'opponents': [np.asarray(v).tolist() for v in vertex],
                           'better_action': game.actions[player][better], 'gap': gap}
    if config.param('threshold'):
        body['threshold'] = robust_threshold(game, profile, tolerance=solver.tolerance)
    columns = ['epsilon', 'robust']
    rows = [{'epsilon': epsilon, 'robust': verdict.robust}]
    summary = '' if verdict.robust else f"{epsilon}-강건 균형이 아닙니다."
    return body, columns, rows, not verdict.robust, summary


def _run_ladder(config, game, solver, mapper):
    profile = _profile(config, game)
    rungs = int(config.param('rungs', 40))
    if rungs < 4:
        raise InvalidParametersError(f"--rungs는 4 이상이어야 합니다 (입력: {rungs}).")
    report = trembling_ladder(game, profile, default_schedule(rungs), solver.tolerance)
    tail_start = len(report.schedule) - max(1, len(report.schedule) // 4)
    families = []
    for name, entries in report.families.items():
        families.append({
            'family': name,
            'all_rungs': all(all(e[0] for e in row) for row in entries),
            'tail': all(all(e[0] for e in row) for row in entries[tail_start:]),
            'min_margin': min(e[1] for row in entries for e in row),
        })
    body = {
        'profile': profile.as_lists(),
        'profile_text': format_profile(profile),
        'schedule': report.schedule,
        'verdict': report.verdict.value,
        'evidence': report.evidence,
        'witness': report.witness,
        'families': families,
    }
    if game.players == 2:
        check = undominated_nash_check(game, profile, solver)
        body['undominated_nash'] = {'nash': check.nash, 'undominated': check.undominated,
                                    'perfect': check.perfect}
    columns = ['family', 'all_rungs', 'tail', 'min_margin']
    return body, columns, families, False, ''


def _run_audit(config, game, solver, mapper):
    shape = parse_shape(config.param('shape', '2x2'))
    num_games = int(config.param('num_games', 100))
    if num_games < 1:
        raise InvalidParametersError(f"--num-games는 1 이상이어야 합니다 (입력: {num_games}).")
    radii_set = parse_float_list(config.param('radii_set', '0,0.05,0.1,0.3'), '--radii')
    metric = Metric.from_flag(config.metric_flag)
    scope = [s.strip() for s in str(config.param('scope', ','.join(AUDIT_SCOPES))).split(',') if s.strip()]
    report = implication_audit(config.seed, num_games, shape, radii_set, metric, solver, mapper, scope)
    body = {
        'seed': report.seed,
        'num_games': report.num_games,
        'shape': list(report.shape),
        'radii': list(report.radii),
        'metric': report.metric.value,
        'scope': list(report.scope),
        'checks': report.checks,
        'violation_count': report.violation_count,
        'violations': report.violations,
        'non_entailment_witness': report.witness,
    }
    columns = ['check', 'runs', 'violations']
    rows = [{'check': name, 'runs': runs,
             'violations': sum(1 for v in report.violations if v.get('check') == name)}
            for name, runs in sorted(report.checks.items())]
    summary = f"함의 관계 위반 {report.violation_count}건" if report.violation_count else ''
    return body, columns, rows, bool(report.violation_count), summary


def _run_oracle(config, game, solver, mapper):
    profile = _profile(config, game)
    metric = Metric.from_flag(config.metric_flag)
    resolution = float(config.param('resolution', 0.05))
    max_cells = int(getattr(settings, 'DBEQ_ORACLE_MAX_CELLS', 30_000_000))
    grid = GridSpec(resolution, config.tolerance, max_cells)
    claim = config.param('claim_notion')
    if claim:
        notion = Notion.from_flag(claim)
        if notion is Notion.NASH:
            raise InvalidParametersError("--claim-notion은 W, B, WR, U, D, SD 중 하나여야 합니다.")
        lo = float(config.param('lo', 0.0))
        hi = float(config.param('hi', 1.0))
        precision = float(config.param('precision', 1e-4))
        result = oracle_threshold(game, profile, notion.value, lo, hi, metric, grid, precision, mapper=mapper)
        around = {}
        for label, radius in (('below', result.value - 0.01), ('above', result.value + 0.01)):
            if lo <= radius <= hi:
                around[label] = {'radius': radius, 'holds': verify_equilibrium(
                    game, profile, radius, metric, settings=solver).holds(notion)}
        body = {
            'mode': 'threshold',
            'profile_text': format_profile(profile),
            'metric': metric.value,
            'resolution': resolution,
            'tolerance': grid.tolerance_for(game),
            'threshold': result.value,
            'notion': result.notion,
            'lo': result.lo,
            'hi': result.hi,
            'note': result.note,
            'probes': [{'radius': r, 'holds': v} for r, v in result.probes],
            'exact_check': around,
        }
        reference = _reference_claim(game, notion.value, profile)
        if reference is not None:
            body['reference_claim'] = reference
            if abs(reference - result.value) > precision:
                logger.warning(
                    f"문서화된 불일치: {game.name} {format_profile(profile)}의 {notion.value} 임계값 "
                    f"주장 {reference:.6g}, 계산값 {result.value:.6g} ({metric.value})"
                )
        columns = ['radius', 'holds']
        return body, columns, body['probes'], False, ''

    radii = _radii(config, game)
    oracle = oracle_verify(game, profile, radii, metric, grid, mapper)
    exact = verify_equilibrium(game, profile, radii, metric, settings=solver)
    disagreements = []
    for i, (approx, precise) in enumerate(zip(oracle.per_player, exact.per_player)):
        for notion in NOTIONS:
            if approx.verdict(notion) != precise.verdict(notion):
                disagreements.append({'player': i, 'notion': notion,
                                      'oracle': approx.verdict(notion), 'exact': precise.verdict(notion)})
    body = {
        'mode': 'verify',
        'profile_text': format_profile(profile),
        'radii': list(radii),
        'metric': metric.value,
        'resolution': resolution,
        'tolerance': oracle.tolerance,
        'oracle_flags': oracle.flags,
        'exact_flags': exact.flags,
        'disagreements': disagreements,
    }
    columns = ['notion', 'oracle', 'exact']
    rows = [{'notion': n, 'oracle': oracle.flags[n], 'exact': exact.flags[n]} for n in NOTIONS]
    return body, columns, rows, False, ''


def _poa_body(report):
    return {
        'status': report.status,
        'poa': report.poa,
        'max_sw': report.max_sw,
        'notion': report.notion,
        'radii': list(report.radii),
        'note': report.note,
        'equilibria': [{'text': format_profile(p), 'welfare': sw} for p, sw in report.equilibrium_set],
    }


def _positive(game):
    return all(float(t.min()) > 0 for t in game.payoffs)


def _run_poa(config, game, solver, mapper):
    notion = _notion(config)
    radii = _radii(config, game, 0.0 if notion is Notion.NASH else 0.1)
    metric = Metric.from_flag(config.metric_flag)
    found = enumerate_pure(game, radii, metric, notion, solver, mapper)
    report = poa(game, found, notion.value, radii)
    body = _poa_body(report)
    body['metric'] = metric.value
    if _positive(game) and notion in (Notion.U, Notion.D, Notion.W, Notion.B):
        try:
            check = poa_bound_check(game, radii, metric, notion, solver, mapper)
        except InvalidParametersError as e:
            logger.warning(f"PoA 하한 검증을 건너뜁니다: {e.detail}")
            check = None
    else:
        check = None
    if check is not None:
        body['bound_check'] = {
            'lambda': check.certificate.lambda_,
            'mu': check.certificate.mu,
            'delta_upper': check.delta_upper,
            'bound': check.bound,
            'min_slack': check.min_slack,
            'violations': check.violations,
        }
    samples = config.param('samples')
    if samples is not None and _positive(game) and max(radii) > 0:
        estimate = delta_estimate(game, max(radii), metric, int(samples), config.seed, solver)
        body['delta'] = {'lower_estimate': estimate.lower_estimate, 'upper_bound': estimate.upper_bound}
    columns = ['text', 'welfare']
    return body, columns, body['equilibria'], False, ''


def _radius(config, default=0.0):
    if config.radii is None:
        return default
    return float(config.radii) if np.isscalar(config.radii) else max(float(r) for r in config.radii)


def _run_delta(config, game, solver, mapper):
    metric = Metric.from_flag(config.metric_flag)
    radius = _radius(config, 0.1)
    samples = int(config.param('samples', getattr(settings, 'DBEQ_SAMPLES', 1000)))
    estimate = delta_estimate(game, radius, metric, samples, config.seed, solver)
    body = {
        'radius': estimate.radius,
        'metric': estimate.metric.value,
        'samples': estimate.samples,
        'seed': estimate.seed,
        'lower_estimate': estimate.lower_estimate,
        'upper_bound': estimate.upper_bound,
        'witness': estimate.witness,
    }
    columns = ['radius', 'lower_estimate', 'upper_bound']
    return body, columns, [{k: body[k] for k in columns}], False, ''


def _run_smoothness(config, game, solver, mapper):
    metric = Metric.from_flag(config.metric_flag)
    radius = _radius(config)
    samples = config.param('samples')
    certificate = smoothness_fit(game, radius, metric, None if samples is None else int(samples),
                                 config.seed, solver)
    if certificate is None:
        body = {'status': 'none', 'certificate': None}
        return body, ['status'], [{'status': 'none'}], False, ''
    body = {
        'status': 'ok',
        'lambda': certificate.lambda_,
        'mu': certificate.mu,
        'bound': certificate.bound,
        'classical_bound': certificate.classical_bound,
        'binding_pair': [list(a) for a in certificate.binding_pair],
        'min_residual': certificate.min_residual,
        'radius': radius,
        'delta': None if certificate.delta is None else {
            'lower_estimate': certificate.delta.lower_estimate,
            'upper_bound': certificate.delta.upper_bound,
        },
    }
    columns = ['lambda', 'mu', 'bound', 'classical_bound']
    return body, columns, [{k: body[k] for k in columns}], False, ''


def _consensus_smoothness(config, game, solver):
    """
    합의 게임의 평활성 쌍: --smooth-lambda/--smooth-mu를 주면 그 쌍을, 아니면 smoothness_fit의 최적 쌍을 검사합니다.
    """
    lambda_, mu = config.param('smooth_lambda'), config.param('smooth_mu')
    if (lambda_ is None) != (mu is None):
        raise InvalidParametersError("--smooth-lambda와 --smooth-mu는 함께 지정해야 합니다.")
    if lambda_ is not None:
        lambda_, mu = float(lambda_), float(mu)
        if lambda_ <= 0 or mu < 0:
            raise InvalidParametersError(f"평활성 쌍은 λ > 0, μ ≥ 0이어야 합니다 (입력: λ={lambda_}, μ={mu}).")
        source = 'given'
    else:
        try:
            certificate = smoothness_fit(game, settings=solver)
        except InvalidParametersError as e:
            return {'source': 'fit', 'status': 'none', 'reason': e.message}
        if certificate is None:
            return {'source': 'fit', 'status': 'none'}
        lambda_, mu, source = certificate.lambda_, certificate.mu, 'fit'
    residual, pair = smoothness_residuals(game, lambda_, mu)
    return {
        'source': source,
        'status': 'ok',
        'lambda': lambda_,
        'mu': mu,
        'bound': lambda_ / (1.0 + mu),
        'min_residual': residual,
        'binding_pair': [list(a) for a in pair],
        'holds': residual >= -RESIDUAL_TOL,
    }


def _run_consensus(config, game, solver, mapper):
    if game is None:
        players = int(config.param('players', 2))
        actions = parse_float_list(config.param('actions', '2'), '--actions')
        actions = [int(a) for a in actions]
        if len(actions) == 1:
            actions = actions * players
        consensus = config.param('consensus_profile')
        if consensus is not None:
            consensus = [int(a) for a in parse_float_list(consensus, '--consensus-profile')]
        game = consensus_generate(players, actions, float(config.param('c', 1.0)),
                                  float(config.param('c_prime', 2.0)), consensus)
        if config.param('save_game'):
            dump_game(game, config.param('save_game'))
            logger.info(f"생성한 합의 게임 저장: {config.param('save_game')}")
    radii = _radii(config, game, 0.1)
    metric = Metric.from_flag(config.metric_flag)
    smoothness = _consensus_smoothness(config, game, solver)
    audit = consensus_audit(game, radii, metric, solver, mapper=mapper)
    body = {
        'game': game.name,
        'shape': list(game.shape),
        'c': audit.c,
        'c_prime': audit.c_prime,
        'consensus': list(audit.consensus),
        'radii': list(audit.radii),
        'metric': metric.value,
        'd_equilibria': [list(a) for a in audit.d_set],
        'unique': audit.unique,
        'mixed_found': [format_profile(p) for p in audit.mixed_found],
        'poa_d': _poa_body(audit.poa_d),
        'poa_nash': _poa_body(audit.poa_nash),
        'smoothness': smoothness,
        'passed': audit.passed,
    }
    columns = ['notion', 'status', 'poa']
    rows = [{'notion': 'D', 'status': audit.poa_d.status, 'poa': audit.poa_d.poa},
            {'notion': 'nash', 'status': audit.poa_nash.status, 'poa': audit.poa_nash.poa}]
    summary = '' if audit.passed else "합의 게임 검증에 실패했습니다."
    return body, columns, rows, not audit.passed, summary


def _run_sweep(config, game, solver, mapper):
    notion = _notion(config, 'W')
    profile = _profile(config, game)
    metric = Metric.from_flag(config.metric_flag)
    grid = parse_r_grid(config.param('r_grid', '0:0.5:0.01'))

    def holds(radius):
        return verify_equilibrium(game, profile, radius, metric, settings=solver).holds(notion)

    verdicts = list(mapper(holds, grid))
    key = f"is_{notion.value}"
    rows = [{'r': r, key: v} for r, v in zip(grid, verdicts)]
    last_true = None
    for r, v in zip(grid, verdicts):
        if not v:
            break
        last_true = r
    body = {
        'notion': notion.value,
        'profile_text': format_profile(profile),
        'metric': metric.value,
        'points': rows,
        'last_true_before_change': last_true,
    }
    reference = _reference_claim(game, notion.value, profile)
    if reference is not None:
        body['reference_claim'] = reference
    return body, ['r', key], rows, False, ''


RUNNERS = {
    'verify': _run_verify,
    'enumerate': _run_enumerate,
    'search': _run_search,
    'robust': _run_robust,
    'ladder': _run_ladder,
    'audit': _run_audit,
    'oracle': _run_oracle,
    'poa': _run_poa,
    'delta': _run_delta,
    'smoothness': _run_smoothness,
    'consensus': _run_consensus,
    'sweep': _run_sweep,
}


def _game_summary(game, source):
    if game is None:
        return None
    return {'name': game.name, 'source': source, 'players': game.players, 'shape': list(game.shape),
            'actions': [list(labels) for labels in game.actions]}


def run_verb(config, mapper=None):
    """
    설정을 검증하고 명령을 실행해 보고서를 만듭니다.

    Args:
        mapper: map과 같은 시그니처의 실행기 (None이면 tasks.parallel_map)

    Raises:
        EquilibriumError: 입력/파라미터/해법 오류 (명령에서 종료 코드 2로 변환)
    """
    config.validate()
    if mapper is None:
        from .tasks import parallel_map
        mapper = parallel_map
    game = resolve_game(config.game) if config.game is not None else None
    solver = SolverSettings.from_settings(tolerance=config.tolerance)
    logger.info(f"[{config.verb}] 실행 시작: {config.game or '-'}")
    body, columns, rows, negative, summary = RUNNERS[config.verb](config, game, solver, mapper)
    report = {
        'schema': REPORT_SCHEMA,
        'verb': config.verb,
        'game': _game_summary(game, config.game),
        'config': config.as_dict(),
        'result': body,
        'exit_code': 1 if negative else 0,
    }
    return RunResult(to_jsonable(report), columns, to_jsonable(rows), negative, summary)


# --- 직렬화/출력 ---

def _fixed(value):
    if not math.isfinite(value):
        return 'nan' if math.isnan(value) else ('inf' if value > 0 else '-inf')
    rounded = float(f"{value:.{FLOAT_DIGITS}g}")
    return 0.0 if rounded == 0 else rounded


def to_jsonable(obj):
    """보고서 값을 JSON 기본 타입으로 바꿉니다 (실수는 유효 숫자 12자리로 고정)."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _fixed(float(obj))
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, MixedStrategy):
        return to_jsonable(obj.probs)
    if isinstance(obj, Profile):
        return to_jsonable(obj.as_lists())
    if isinstance(obj, Game):
        return obj.name
    if is_dataclass(obj):
        return to_jsonable(asdict(obj))
    return obj


def render_json(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def _cell(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return ''
    if isinstance(value, float):
        return f"{value:.{FLOAT_DIGITS}g}"
    return str(value)


def render_csv(columns, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buffer.getvalue().rstrip('\n')


def render_table(columns, rows):
    cells = [[_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[k]) for r in cells]) for k, c in enumerate(columns)]
    lines = ['  '.join(c.ljust(w) for c, w in zip(columns, widths)).rstrip(),
             '  '.join('-' * w for w in widths)]
    lines.extend('  '.join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells)
    return '\n'.join(lines)


def render(result, output_format):
    if output_format == 'csv':
        return render_csv(result.columns, result.rows)
    if output_format == 'table':
        return render_table(result.columns, result.rows)
    return render_json(result.report)


# --- 실행 기록 저장 ---

def save_run(config, result):
    """완료된 분석을 AnalysisRun으로 저장합니다."""
    from .models import AnalysisRun
    game = result.report.get('game') or {}
    run = AnalysisRun.objects.create(
        verb=config.verb,
        game_name=game.get('name') or config.game or config.verb,
        config=config.as_dict(),
        report=result.report,
        status='completed',
        exit_code=result.exit_code,
    )
    logger.info(f"분석 실행 #{run.id} 저장 ({config.verb})")
    return run


def enqueue_run(config):
    """'처리 중' 실행을 만들고 Celery 작업으로 넘깁니다."""
    from .models import AnalysisRun
    from .tasks import run_analysis_task
    config.validate()
    run = AnalysisRun.objects.create(
        verb=config.verb,
        game_name=config.game or config.verb,
        config=config.as_dict(),
        status='processing',
    )
    run_analysis_task.delay(run.id)
    return run
