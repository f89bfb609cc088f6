"""
반지름 격자 위에서 균형 여부를 기록하는 관리 명령어 (외부 도구로 그릴 원자료)

사용법:
    python manage.py sweep GAME --profile PROFILE [--notion W] [--r-grid 0:0.5:0.01] [--metric METRIC] [--format csv]

옵션:
    --r-grid: lo:hi:step (양 끝 포함, 기본값: 0:0.5:0.01)
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = '반지름마다 (r, 판정) 행을 출력합니다.'
    verb = 'sweep'

    def add_verb_arguments(self, parser):
        parser.add_argument('--profile', required=True, help='프로파일 리터럴')
        parser.add_argument('--notion', default='W', help='균형 개념 (기본값: W)')
        parser.add_argument('--r-grid', default='0:0.5:0.01', help='lo:hi:step')

    def verb_params(self, options):
        return {'profile': options['profile'], 'notion': options['notion'], 'r_grid': options['r_grid']}
