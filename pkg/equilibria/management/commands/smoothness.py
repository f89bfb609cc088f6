"""
(λ, μ)-평활성 인증서를 적합하는 관리 명령어

사용법:
    python manage.py smoothness GAME [--r R] [--metric METRIC] [--samples N]

옵션:
    --r: 지정하면 δ_G(r)을 반영한 하한 λ/(δ² + μ)도 보고
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = 'λ/(1+μ)를 최대화하는 평활성 상수를 찾습니다.'
    verb = 'smoothness'

    def add_verb_arguments(self, parser):
        parser.add_argument('--samples', type=int, help='δ_G 표본 중심 수')

    def verb_params(self, options):
        return {'samples': options.get('samples')}
