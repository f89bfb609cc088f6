from django.db import models
from django.utils.translation import gettext_lazy as _


class AnalysisRun(models.Model):
    """
    분석 실행 기록 모델
    관리 명령(--save) 또는 비동기 감사(audit --async)로 실행한 분석의 설정과 보고서를 저장합니다.

    컬럼:
    - id: INTEGER (PK, 자동 생성)
    - verb: VARCHAR(32) - 실행한 분석 명령 (verify, enumerate, audit 등)
    - game_name: VARCHAR(255) - 게임 이름 (게임 파일이 없는 감사/합의 생성은 생성 설명)
    - config: JSON - 실행 설정 (경로, 거리, 반지름, 개념, 허용 오차, 시드 등)
    - report: JSON (NULL 허용) - 보고서 문서 ("schema": "dbeq/1")
    - status: VARCHAR(20) - 처리 상태 ('processing': 처리 중, 'completed': 완료, 'failed': 실패)
    - exit_code: INTEGER (NULL 허용) - 명령 종료 코드 (0 성공, 1 부정적 분석 결과)
    - error_message: TEXT (NULL 허용) - 실패 시 오류 메시지
    - progress: JSON - 진행 단계 ({"stage": 단계 이름, "pass": 몇 번째 병렬 구간, "done": 끝난 단위 수, "total": 전체 단위 수})
    - progress_at: DATETIME (NULL 허용) - 마지막 진행 기록 일시 (오래된 실행 판정 기준)
    - created_at: DATETIME - 생성 일시 (자동 생성)
    - updated_at: DATETIME - 마지막 갱신 일시 (자동 갱신)
    """
    STATUS_CHOICES = [
        ('processing', '처리 중'),
        ('completed', '완료'),
        ('failed', '실패'),
    ]

    verb = models.CharField(max_length=32, verbose_name="분석 명령")
    game_name = models.CharField(max_length=255, blank=True, default='', verbose_name="게임 이름")
    config = models.JSONField(default=dict, blank=True, verbose_name="실행 설정")
    report = models.JSONField(blank=True, null=True, verbose_name="보고서")
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='processing')
    exit_code = models.IntegerField(blank=True, null=True, verbose_name="종료 코드")
    error_message = models.TextField(blank=True, null=True, verbose_name="오류 메시지")
    progress = models.JSONField(default=dict, blank=True, verbose_name="진행 단계")
    progress_at = models.DateTimeField(blank=True, null=True, verbose_name="마지막 진행 일시")
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['-created_at']
        verbose_name = _('분석 실행')
        verbose_name_plural = _('분석 실행 기록')

    def __str__(self):
        return f"#{self.id} {self.verb} - {self.game_name} ({self.get_status_display()})"

    def stage_text(self):
        """진행 기록을 사람이 읽는 단계 설명으로 (기록이 없으면 '시작 전')"""
        progress = self.progress or {}
        if not progress:
            return '시작 전'
        text = f"{progress.get('stage', self.verb)} {progress.get('done', 0)}/{progress.get('total', '?')}"
        if progress.get('pass', 1) > 1:
            text += f" ({progress['pass']}번째 구간)"
        return text
