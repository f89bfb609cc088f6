"""
진행 기록이 끊긴 '처리 중' 분석 실행을 찾아 실패로 표시하는 관리 명령어

사용법:
    python manage.py check_stale_runs [--minutes MINUTES] [--verb audit] [--dry-run]

옵션:
    --minutes: 마지막 진행 기록(없으면 생성 시각) 뒤로 허용할 시간(분) (기본값: DBEQ_STALE_MINUTES)
    --verb: 해당 명령의 실행만 검사 (예: audit, sweep)
    --dry-run: 실제로 상태를 변경하지 않고 어떤 실행이 영향을 받을지만 표시

실패로 표시된 실행의 오류 메시지에는 중단된 단계(예: '감사 게임 37/200')와 실행 설정이 남습니다.
"""
from django.core.management.base import BaseCommand, CommandError

from equilibria.services import VERBS
from equilibria.tasks import check_stale_runs


class Command(BaseCommand):
    help = '진행 기록이 끊긴 "처리 중" 분석 실행을 감지하고 중단 단계와 함께 실패로 표시합니다.'

    def add_arguments(self, parser):
        parser.add_argument(
            '--minutes',
            type=int,
            help='진행 기록 없이 허용할 시간(분) (기본값: DBEQ_STALE_MINUTES)',
        )
        parser.add_argument(
            '--verb',
            help='해당 분석 명령의 실행만 검사',
        )
        parser.add_argument(
            '--dry-run',
            action='store_true',
            help='실제로 상태를 변경하지 않고 어떤 실행이 영향을 받을지만 표시',
        )

    def handle(self, *args, **options):
        minutes = options['minutes']
        verb = options['verb']
        dry_run = options['dry_run']
        if verb and verb not in VERBS:
            raise CommandError(f"알 수 없는 분석 명령 '{verb}' ({', '.join(VERBS)} 중 선택)", returncode=2)
        if minutes is not None and minutes < 0:
            raise CommandError("--minutes는 0 이상이어야 합니다.", returncode=2)

        count, updated_count = check_stale_runs(minutes=minutes, dry_run=dry_run, verb=verb)

        if count == 0:
            self.stdout.write(self.style.SUCCESS('진행 기록이 끊긴 "처리 중" 실행이 없습니다.'))
        elif not dry_run:
            self.stdout.write(self.style.SUCCESS(f'\n{updated_count}개의 실행 상태를 "실패"로 업데이트했습니다.'))
        else:
            self.stdout.write(self.style.WARNING(f'\n--dry-run 모드: {count}개의 실행이 업데이트될 것입니다.'))
