"""
순수 프로파일의 ε-강건 균형 여부를 판정하는 관리 명령어

사용법:
    python manage.py robust GAME --profile PROFILE --epsilon EPS [--threshold]

옵션:
    --epsilon: 잡음 크기 (0, 1)
    --threshold: 강건성이 유지되는 최대 ε도 함께 계산
    강건하지 않으면 보고서를 출력한 뒤 종료 코드 1
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = '상대의 모든 ε-잡음 변형에 대해 순수 행동이 최선 응답인지 판정합니다.'
    verb = 'robust'

    def add_verb_arguments(self, parser):
        parser.add_argument('--profile', required=True, help='순수 프로파일 리터럴')
        parser.add_argument('--epsilon', type=float, required=True, help='잡음 크기 ε')
        parser.add_argument('--threshold', action='store_true', help='최대 ε 이분 탐색')

    def verb_params(self, options):
        return {'profile': options['profile'], 'epsilon': options['epsilon'],
                'threshold': options['threshold']}
