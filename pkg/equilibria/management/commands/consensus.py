"""
합의 게임의 유일 D_r 균형과 PoA = 1을 검증하는 관리 명령어

사용법:
    python manage.py consensus [GAME] [--players N] [--actions K] [--c C] [--c-prime C2] [--consensus-profile 0,0] [--save-game PATH] [--smooth-lambda L --smooth-mu M] [--r R]

옵션:
    GAME을 주지 않으면 --players, --actions, --c, --c-prime으로 합의 게임을 생성
    --actions: 공통 행동 수 또는 플레이어별 행동 수 (콤마 구분, 기본값: 2)
    --save-game: 생성한 게임을 JSON 게임 문서로 저장 (GAME을 준 경우 무시)
    --smooth-lambda, --smooth-mu: 검사할 (λ, μ)-평활성 쌍 (기본값: smoothness_fit이 찾은 최적 쌍)
    --r: 반지름 (기본값: 0.1, 0보다 커야 함)
    검증에 실패하면 보고서를 출력한 뒤 종료 코드 1
"""
from equilibria.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = '합의 게임에서 D_r 균형이 합의 프로파일 하나뿐이고 PoA가 1인지 확인합니다.'
    verb = 'consensus'
    game_required = False

    def add_verb_arguments(self, parser):
        parser.add_argument('--players', type=int, default=2, help='플레이어 수 (기본값: 2)')
        parser.add_argument('--actions', default='2', help='행동 수 (기본값: 2)')
        parser.add_argument('--c', type=float, default=1.0, help='합의 밖 보수 (기본값: 1)')
        parser.add_argument('--c-prime', type=float, default=2.0, help='합의 보수 (기본값: 2)')
        parser.add_argument('--consensus-profile', help='합의 프로파일 행동 인덱스 (기본값: 모두 0)')
        parser.add_argument('--save-game', help='생성한 합의 게임을 게임 문서(JSON)로 저장할 경로')
        parser.add_argument('--smooth-lambda', type=float, help='검사할 평활성 λ (--smooth-mu와 함께)')
        parser.add_argument('--smooth-mu', type=float, help='검사할 평활성 μ (--smooth-lambda와 함께)')

    def verb_params(self, options):
        return {key: options.get(key) for key in
                ('players', 'actions', 'c', 'c_prime', 'consensus_profile', 'save_game',
                 'smooth_lambda', 'smooth_mu')}
