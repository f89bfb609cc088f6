"""
프로파일이 거리 기반 균형(W, B, WR, U, D, SD)인지 판정하는 관리 명령어

사용법:
    python manage.py verify GAME --profile PROFILE [--r R | --r-vec R0,R1,...] [--metric METRIC] [--expect NOTIONS]

옵션:
    --profile: 프로파일 리터럴 (예: "p0:1,0;p1:1,0" 또는 "p0:Up;p1:Left")
    --expect: 성립해야 하는 개념들 (콤마 구분). 하나라도 거짓이면 보고서를 출력한 뒤 종료 코드 1
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = '프로파일의 플레이어별 응답 판정과 개념별 균형 여부를 보고합니다.'
    verb = 'verify'

    def add_verb_arguments(self, parser):
        parser.add_argument('--profile', required=True, help='프로파일 리터럴')
        parser.add_argument('--expect', help='성립해야 하는 개념 (예: W,SD)')

    def verb_params(self, options):
        return {'profile': options['profile'], 'expect': options.get('expect')}
