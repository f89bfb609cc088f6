"""
격자 브루트포스 오라클로 판정하거나 균형 임계 반지름을 이분 탐색하는 관리 명령어

사용법:
    python manage.py oracle GAME --profile PROFILE [--resolution H] [--r R] [--metric METRIC]
    python manage.py oracle GAME --profile PROFILE --claim-notion W [--lo 0] [--hi 1] [--precision 1e-4]

옵션:
    --resolution: 격자 간격 (기본값: 0.05)
    --claim-notion: 지정하면 "프로파일이 ★_r 균형"이 참에서 거짓으로 바뀌는 반지름을 탐색
    --lo, --hi: 탐색 구간 (기본값: 0, 1)
    --precision: 탐색 정밀도 (기본값: 1e-4)
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = '정확한 해법과 독립적인 격자 오라클로 판정하고 정확한 판정과 비교합니다.'
    verb = 'oracle'

    def add_verb_arguments(self, parser):
        parser.add_argument('--profile', required=True, help='프로파일 리터럴')
        parser.add_argument('--resolution', type=float, default=0.05, help='격자 간격 (기본값: 0.05)')
        parser.add_argument('--claim-notion', help='임계값 탐색 개념 (W, B, WR, U, D, SD)')
        parser.add_argument('--lo', type=float, help='탐색 구간 하한 (기본값: 0)')
        parser.add_argument('--hi', type=float, help='탐색 구간 상한 (기본값: 1)')
        parser.add_argument('--precision', type=float, help='탐색 정밀도 (기본값: 1e-4)')

    def verb_params(self, options):
        return {key: options.get(key) for key in
                ('profile', 'resolution', 'claim_notion', 'lo', 'hi', 'precision')}
