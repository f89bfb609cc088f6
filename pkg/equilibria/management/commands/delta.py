"""
신념 공 안에서의 최대 효용 비 δ_G(r)를 추정하는 관리 명령어

사용법:
    python manage.py delta GAME [--r R] [--metric METRIC] [--samples N] [--seed S]

옵션:
    --samples: 표본 중심 수 (기본값: DBEQ_SAMPLES)
    모든 보수가 양수여야 합니다.
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = 'δ_G(r)의 하한 추정값과 건전한 상한을 보고합니다.'
    verb = 'delta'

    def add_verb_arguments(self, parser):
        parser.add_argument('--samples', type=int, help='표본 중심 수')

    def verb_params(self, options):
        return {'samples': options.get('samples')}
