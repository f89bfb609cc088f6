
class EquilibriumError(Exception):
    """분석 라이브러리에서 발생하는 모든 예외의 기본 클래스"""
    def __init__(self, message):
        self.message = message
        super().__init__(self.message)


class ShapeError(EquilibriumError):
    """프로파일/게임/신념 벡터의 차원이 맞지 않을 때 발생하는 예외"""
    def __init__(self, detail):
        self.detail = detail
        super().__init__(f"차원 불일치: {detail}")


class GameParseError(EquilibriumError):
    """게임 문서(JSON) 또는 프로파일 리터럴을 해석할 수 없을 때 발생하는 예외"""
    def __init__(self, detail, field=None, line=None, source=None):
        self.detail = detail
        self.field = field
        self.line = line
        self.source = source
        location = []
        if source:
            location.append(str(source))
        if line is not None:
            location.append(f"{line}행")
        if field:
            location.append(f"필드 '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}게임 문서 해석 실패: {detail}")


class CapabilityError(EquilibriumError):
    """요청한 계산을 현재 거리/게임 조합으로 정확히 풀 수 없을 때 발생하는 예외"""
    def __init__(self, detail, player=None):
        self.detail = detail
        self.player = player
        who = f"플레이어 {player}: " if player is not None else ""
        super().__init__(f"{who}지원하지 않는 계산입니다. {detail}")


class InvalidParametersError(EquilibriumError):
    """입력 파라미터가 전제 조건을 만족하지 않을 때 발생하는 예외"""
    def __init__(self, detail):
        self.detail = detail
        super().__init__(f"잘못된 파라미터: {detail}")


class PositivityError(EquilibriumError):
    """δ_G 계산에 0 이하의 보수가 포함되어 있을 때 발생하는 예외"""
    def __init__(self, min_payoff):
        self.min_payoff = min_payoff
        super().__init__(
            f"모든 보수가 양수여야 합니다 (최솟값: {min_payoff:g}). "
            f"보수를 양수 구간으로 평행 이동한 뒤 다시 실행하세요. "
            f"단, δ_G는 아핀 변환에 불변이 아니므로 결과 해석에 주의해야 합니다."
        )


class NotConsensusGameError(ShapeError):
    """합의 게임(consensus game) 형태가 아닌 게임이 입력되었을 때 발생하는 예외"""
    def __init__(self, detail):
        super().__init__(f"합의 게임이 아닙니다: {detail}")


class OracleCostError(EquilibriumError):
    """브루트포스 오라클의 격자 크기가 허용 범위를 넘을 때 발생하는 예외"""
    def __init__(self, own_points, ball_points, limit):
        self.own_points = own_points
        self.ball_points = ball_points
        self.limit = limit
        super().__init__(
            f"오라클 격자가 너무 큽니다: 전략 격자 {own_points}개 × 신념 격자 {ball_points}개 "
            f"= {own_points * ball_points}개 (한도 {limit}). 해상도를 낮춰주세요."
        )


class NonMonotoneError(EquilibriumError):
    """임계값 이분 탐색의 판정이 반지름에 대해 단조가 아닐 때 발생하는 예외"""
    def __init__(self, false_at, true_at):
        self.false_at = false_at
        self.true_at = true_at
        super().__init__(
            f"판정이 반지름에 대해 단조 감소하지 않습니다: r={false_at:.6g}에서 거짓이지만 "
            f"더 큰 r={true_at:.6g}에서 참입니다."
        )


class SolverError(EquilibriumError):
    """선형 계획법 등 내부 해법이 실패했을 때 발생하는 예외"""
    def __init__(self, detail):
        self.detail = detail
        super().__init__(f"해법 실패: {detail}")
