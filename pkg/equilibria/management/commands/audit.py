"""
시드 고정 무작위 게임 위에서 응답/균형 개념 사이의 함의 관계를 감사하는 관리 명령어

사용법:
    python manage.py audit [--num-games N] [--shape 2x2] [--radii 0,0.05,0.1,0.3] [--seed S] [--async]
    python manage.py audit --stale-minutes 30

옵션:
    --num-games: 감사할 게임 수 (기본값: 100)
    --shape: 플레이어별 행동 수 (기본값: 2x2)
    --radii: 검사할 반지름 목록 (0은 항상 포함)
    --scope: 검사 묶음 (lattice: 판정 격자/유일 증인/r=0 붕괴/SD 단조성, bridge: ε-강건 다리, 기본값: 둘 다)
    --async: 계산하지 않고 Celery 작업으로 넘김 (AnalysisRun 'processing' 생성)
    --stale-minutes: 진행 기록이 지정한 분 넘게 끊긴 감사 실행을 실패로 표시 (중단된 게임 번호 기록)
    위반이 있으면 보고서를 출력한 뒤 종료 코드 1
"""
from django.core.management.base import CommandError

from equilibria.exceptions import EquilibriumError
from equilibria.management.base import AnalysisCommand
from equilibria.services import enqueue_run
from equilibria.tasks import check_stale_runs


class Command(AnalysisCommand):
    help = '무작위 게임에서 SD⇒D⇒{W,B,WR,U}, r=0 붕괴, 강건성 연결 등의 위반을 찾습니다.'
    verb = 'audit'
    game_required = False

    def add_verb_arguments(self, parser):
        parser.add_argument('--num-games', type=int, default=100, help='감사할 게임 수 (기본값: 100)')
        parser.add_argument('--shape', default='2x2', help='플레이어별 행동 수 (기본값: 2x2)')
        parser.add_argument('--radii', default='0,0.05,0.1,0.3', help='반지름 목록 (콤마 구분)')
        parser.add_argument('--scope', default='lattice,bridge', help='검사 묶음 (콤마 구분, 기본값: lattice,bridge)')
        parser.add_argument('--async', dest='run_async', action='store_true', help='Celery 작업으로 실행')
        parser.add_argument('--stale-minutes', type=int, help='오래된 처리 중 실행을 실패로 표시')

    def verb_params(self, options):
        return {'num_games': options['num_games'], 'shape': options['shape'], 'radii_set': options['radii'],
                'scope': options['scope']}

    def before_run(self, config, options):
        minutes = options.get('stale_minutes')
        if minutes is not None:
            count, updated_count = check_stale_runs(minutes=minutes, verb='audit')
            self.stdout.write(self.style.SUCCESS(
                f'오래된 실행 {count}개 중 {updated_count}개를 "실패"로 업데이트했습니다.'
            ))
            return True
        if options.get('run_async'):
            try:
                run = enqueue_run(config)
            except EquilibriumError as e:
                raise CommandError(e.message, returncode=2)
            self.stdout.write(self.style.SUCCESS(f"감사 작업 #{run.id}를 큐에 등록했습니다."))
            return True
        return False
