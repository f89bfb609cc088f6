"""
2인 게임의 혼합 전략 격자에서 균형 후보를 찾는 관리 명령어

사용법:
    python manage.py search GAME --notion NOTION [--resolution H] [--r R] [--metric METRIC] [--tol TOL]

옵션:
    --resolution: 격자 간격 (0, 0.25], 1/H는 정수 (기본값: 0.05)
    --tol: 격자 판정 허용 오차 (기본값: 최대 보수 범위 × H)
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = '혼합 전략 격자 위 ★_r 균형 후보를 찾습니다.'
    verb = 'search'

    def add_verb_arguments(self, parser):
        parser.add_argument('--notion', default='W', help='균형 개념 (기본값: W)')
        parser.add_argument('--resolution', type=float, default=0.05, help='격자 간격 (기본값: 0.05)')

    def verb_params(self, options):
        return {'notion': options['notion'], 'resolution': options['resolution']}
