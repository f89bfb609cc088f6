"""
떨리는 손 섭동 사다리로 완전 균형 증거를 모으는 관리 명령어

사용법:
    python manage.py ladder GAME --profile PROFILE [--rungs K]

옵션:
    --rungs: 섭동 단계 수, ε_k = 2^-k (기본값: 40)
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = '완전 혼합 섭동 사다리에서 최선 응답 여부를 검사합니다 (증명이 아닌 증거).'
    verb = 'ladder'

    def add_verb_arguments(self, parser):
        parser.add_argument('--profile', required=True, help='프로파일 리터럴')
        parser.add_argument('--rungs', type=int, default=40, help='섭동 단계 수 (기본값: 40)')

    def verb_params(self, options):
        return {'profile': options['profile'], 'rungs': options['rungs']}
