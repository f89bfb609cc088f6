"""
순수 균형 집합의 무정부 비용(PoA)을 계산하는 관리 명령어

사용법:
    python manage.py poa GAME [--notion NOTION] [--r R] [--metric METRIC] [--samples N]

옵션:
    --notion: nash, W, B, WR, U, D, SD (기본값: nash)
    --samples: 지정하면 δ_G(r) 추정값도 함께 보고 (양수 보수 게임)
    균형 집합이 비면 status 'undefined'
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = '최대 사회 후생 / 균형의 최소 사회 후생을 계산합니다.'
    verb = 'poa'

    def add_verb_arguments(self, parser):
        parser.add_argument('--notion', default='nash', help='균형 개념 (기본값: nash)')
        parser.add_argument('--samples', type=int, help='δ_G 표본 중심 수')

    def verb_params(self, options):
        return {'notion': options['notion'], 'samples': options.get('samples')}
