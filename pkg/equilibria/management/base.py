"""
분석 관리 명령의 공통 기반 클래스

공통 옵션:
    game: 게임 파일 경로 또는 예제 이름 (trembling, pennies, staghunt, prisoners, weakly-dominated)
    --metric: 신념 거리 (l2, l1, linf; 기본값: DBEQ_DEFAULT_METRIC)
    --r / --r-vec: 모든 플레이어 공통 반지름 / 콤마로 구분한 플레이어별 반지름
    --tol: 판정 허용 오차
    --format: 출력 형식 (json, table, csv)
    --out: 보고서를 저장할 파일 (지정하지 않으면 표준 출력)
    --seed: 난수 시드
    --save: 실행 설정과 보고서를 AnalysisRun으로 저장

종료 코드: 0 성공, 1 부정적 분석 결과 (보고서는 먼저 출력), 2 사용법/입력 오류
"""
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from equilibria.exceptions import EquilibriumError
from equilibria.services import OUTPUT_FORMATS, RunConfig, parse_radii_vector, render, run_verb, save_run


class AnalysisCommand(BaseCommand):
    verb = None
    # audit/consensus는 게임 파일 없이도 실행
    game_required = True

    def add_arguments(self, parser):
        parser.add_argument(
            'game',
            nargs=None if self.game_required else '?',
            help='게임 파일 경로 또는 예제 이름',
        )
        parser.add_argument(
            '--metric',
            choices=['l2', 'l1', 'linf'],
            help='신념 거리 (기본값: DBEQ_DEFAULT_METRIC 설정)',
        )
        radii = parser.add_mutually_exclusive_group()
        radii.add_argument('--r', type=float, help='모든 플레이어 공통 반지름')
        radii.add_argument('--r-vec', help='플레이어별 반지름 (예: 0.1,0.2)')
        parser.add_argument('--tol', type=float, help='판정 허용 오차')
        parser.add_argument('--format', choices=OUTPUT_FORMATS, default='json', help='출력 형식 (기본값: json)')
        parser.add_argument('--out', help='보고서를 저장할 파일 경로')
        parser.add_argument('--seed', type=int, default=0, help='난수 시드 (기본값: 0)')
        parser.add_argument('--save', action='store_true', help='실행 기록을 데이터베이스에 저장')
        self.add_verb_arguments(parser)

    def add_verb_arguments(self, parser):
        pass

    def verb_params(self, options):
        return {}

    def build_config(self, options):
        radii = options.get('r')
        if options.get('r_vec'):
            radii = parse_radii_vector(options['r_vec'])
        params = {k: v for k, v in self.verb_params(options).items() if v is not None and v is not False}
        return RunConfig(
            verb=self.verb,
            game=options.get('game'),
            metric=options.get('metric'),
            radii=radii,
            tolerance=options.get('tol'),
            output_format=options['format'],
            seed=options['seed'],
            params=params,
        ).validate()

    def handle(self, *args, **options):
        try:
            config = self.build_config(options)
            if self.before_run(config, options):
                return
            result = run_verb(config)
        except EquilibriumError as e:
            raise CommandError(e.message, returncode=2)

        self.emit(render(result, config.output_format), options.get('out'))
        if options['save']:
            run = save_run(config, result)
            if options.get('out'):
                self.stdout.write(self.style.SUCCESS(f"분석 실행 #{run.id}를 저장했습니다."))
        if result.negative:
            raise CommandError(result.summary, returncode=1)

    def before_run(self, config, options):
        """참을 반환하면 분석을 실행하지 않고 종료합니다."""
        return False

    def emit(self, text, out):
        if out:
            Path(out).write_text(text + '\n', encoding='utf-8')
            self.stdout.write(self.style.SUCCESS(f"보고서를 {out}에 저장했습니다."))
        else:
            self.stdout.write(text)
