"""
순수 프로파일 중 지정한 개념의 균형을 모두 나열하는 관리 명령어

사용법:
    python manage.py enumerate GAME [--notion NOTION] [--r R] [--metric METRIC] [--supports]

옵션:
    --notion: nash, W, B, WR, U, D, SD (기본값: nash)
    --supports: 2인 게임의 혼합 내쉬 균형을 지지 집합 열거로 함께 보고
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = '순수 균형을 사전식 순서로 나열합니다.'
    verb = 'enumerate'

    def add_verb_arguments(self, parser):
        parser.add_argument('--notion', default='nash', help='균형 개념 (기본값: nash)')
        parser.add_argument('--supports', action='store_true', help='지지 집합 열거 결과 포함')

    def verb_params(self, options):
        return {'notion': options['notion'], 'supports': options['supports']}
