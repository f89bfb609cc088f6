from celery import shared_task
from .models import AnalysisRun
from .services import RunConfig, run_verb
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from django.db import transaction
from django.db.models.functions import Coalesce
from django.utils import timezone
from django.conf import settings
from datetime import timedelta
from tqdm import tqdm

# 명령별 병렬 작업 단위 이름 (진행 기록과 실패 메시지에 씀)
STAGE_LABELS = {
    'audit': '감사 게임',
    'sweep': '반지름 격자점',
    'enumerate': '순수 프로파일',
    'poa': '순수 프로파일',
    'consensus': '합의 게임 검사 단위',
    'search': '신념 중심',
    'oracle': '자기 전략 격자 묶음',
}


# --- 병렬 실행기 ---

def parallel_map(func, items, max_workers=None, desc=None, on_done=None):
    """
    map과 같은 시그니처의 스레드 풀 실행기
    결과는 완료 순서와 무관하게 입력 순서대로 합쳐지므로 출력이 결정적입니다.

    Args:
        func: 작업 함수 (항목 하나를 받음)
        items: 작업 항목들
        max_workers: 스레드 수 (기본값: DBEQ_THREADS)
        desc: tqdm 진행률 표시 이름 (DBEQ_PROGRESS가 켜져 있을 때만 표시)
        on_done: 항목 하나가 끝날 때마다 끝난 개수로 호출 (호출 스레드에서 실행)

    Returns:
        list: 입력 순서대로 정렬된 결과
    """
    items = list(items)
    if max_workers is None:
        max_workers = getattr(settings, 'DBEQ_THREADS', 4)
    max_workers = max(1, min(int(max_workers), len(items) or 1))
    results = [None] * len(items)
    progress = tqdm(total=len(items), desc=desc, disable=not getattr(settings, 'DBEQ_PROGRESS', False))
    done = 0

    def finished():
        nonlocal done
        done += 1
        progress.update(1)
        if on_done is not None:
            on_done(done)

    if max_workers == 1:
        for index, item in enumerate(items):
            results[index] = func(item)
            finished()
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = {executor.submit(func, item): index for index, item in enumerate(items)}
            for future in as_completed(futures):
                # 작업 예외는 여기서 다시 발생해 호출자에게 전달됨
                results[futures[future]] = future.result()
                finished()
    progress.close()
    return results


class RunProgress:
    """
    AnalysisRun에 진행 단계를 남기는 mapper (parallel_map과 같은 시그니처)

    라이브러리가 mapper를 부를 때마다 구간 번호가 하나 늘고, 단위가 끝날 때마다
    progress(done/total)와 progress_at이 갱신됩니다. 오래된 실행 판정은 progress_at을 기준으로 합니다.
    """

    def __init__(self, run_id, verb, max_workers=None):
        self.run_id = run_id
        self.stage = STAGE_LABELS.get(verb, '작업 단위')
        self.max_workers = max_workers
        self.passes = 0

    def __call__(self, func, items):
        items = list(items)
        self.passes += 1
        total = len(items)
        self.record(0, total)
        return parallel_map(func, items, self.max_workers, desc=self.stage,
                            on_done=lambda done: self.record(done, total))

    def record(self, done, total):
        AnalysisRun.objects.filter(id=self.run_id).update(
            progress={'stage': self.stage, 'pass': self.passes, 'done': done, 'total': total},
            progress_at=timezone.now(),
        )


def _config_summary(run):
    """실패 메시지에 붙일 명령 설정 요약 (재실행에 필요한 값만)"""
    config = run.config or {}
    params = config.get('params') or {}
    keys = {
        'audit': ('num_games', 'shape', 'radii_set', 'scope'),
        'sweep': ('notion', 'profile', 'r_grid'),
    }.get(run.verb, tuple(sorted(params)))
    parts = [f"{k}={params[k]}" for k in keys if k in params]
    if config.get('seed') is not None:
        parts.insert(0, f"seed={config['seed']}")
    if config.get('metric'):
        parts.append(f"metric={config['metric']}")
    return ', '.join(parts)


# --- 자식 작업 함수 ---

def _analysis_worker(config, mapper=parallel_map):
    """
    분석 명령 실행 작업 함수
    run_analysis_task에서 실행됩니다.
    """
    label = f"{config.verb} 워커"
    try:
        print(f"[{label}] 시작...")
        start_time = time.time()

        result = run_verb(config, mapper=mapper)

        elapsed_sec = time.time() - start_time
        print(f"[{label}] 완료 (소요 시간: {elapsed_sec:.2f}초, 종료 코드: {result.exit_code})")

        return {
            'success': True,
            'report': result.report,
            'exit_code': result.exit_code,
            'elapsed_sec': elapsed_sec
        }
    except Exception as e:
        print(f"[{label}] 실패: {e}")
        return {
            'success': False,
            'error': str(e)
        }


def mark_run_as_failed(run_id, error_message=None):
    """
    처리 중인 분석 실행을 실패로 표시합니다. 오류 메시지 앞에 중단된 단계를 붙입니다.
    """
    try:
        with transaction.atomic():
            run = AnalysisRun.objects.select_for_update().get(id=run_id)
            if run.status == 'processing':  # 아직 처리 중인 경우에만 실패로 표시
                run.status = 'failed'
                run.error_message = f"[{run.stage_text()}] {error_message}"
                run.save()
                print(f"분석 실행 {run_id}를 실패 상태로 표시했습니다. ({run.error_message})")
    except AnalysisRun.DoesNotExist:
        print(f"분석 실행 {run_id}를 찾을 수 없습니다.")


def check_stale_runs(minutes=None, dry_run=False, verb=None):
    """
    진행 기록이 끊긴 '처리 중' 분석 실행을 찾아 실패로 표시합니다.

    마지막 신호는 progress_at(없으면 created_at)입니다. 작업 단위마다 진행이 기록되므로
    게임 수가 많은 감사도 살아 있는 동안에는 오래된 실행으로 잡히지 않습니다.

    Args:
        minutes: 진행 기록 없이 허용할 시간(분) (기본값: DBEQ_STALE_MINUTES)
        dry_run: 실제로 상태를 변경하지 않고 확인만 할지 여부 (기본값: False)
        verb: 이 명령의 실행만 검사 (기본값: 전체)

    Returns:
        tuple: (발견된 실행 수, 업데이트된 실행 수)
    """
    if minutes is None:
        minutes = getattr(settings, 'DBEQ_STALE_MINUTES', 30)
    now = timezone.now()
    cutoff_time = now - timedelta(minutes=minutes)

    stale_runs = AnalysisRun.objects.filter(status='processing').annotate(
        last_signal=Coalesce('progress_at', 'created_at')
    ).filter(last_signal__lt=cutoff_time).order_by('created_at')
    if verb:
        stale_runs = stale_runs.filter(verb=verb)

    count = stale_runs.count()
    updated_count = 0

    if count > 0:
        print(f"[오래된 작업 감지] 진행 기록이 {minutes}분 넘게 끊긴 '처리 중' 분석 실행 {count}개를 발견했습니다.")

        for run in stale_runs:
            silence = (now - run.last_signal).total_seconds() / 60
            print(f"  - 실행 ID {run.id}: '{run.verb}' {run.stage_text()} (마지막 진행: {silence:.1f}분 전)")

            if not dry_run:
                run.status = 'failed'
                run.error_message = (
                    f"[{run.stage_text()}] {silence:.1f}분 동안 진행 기록이 없어 실패로 표시했습니다. "
                    f"({_config_summary(run)})"
                )
                run.save()
                updated_count += 1

        if not dry_run:
            print(f"[오래된 작업 감지] {updated_count}개의 실행 상태를 '실패'로 업데이트했습니다.")
        else:
            print(f"[오래된 작업 감지] --dry-run 모드: {count}개의 실행이 업데이트될 것입니다.")
    else:
        print(f"[오래된 작업 감지] 진행 기록이 끊긴 '처리 중' 실행이 없습니다. (기준: {minutes}분)")

    return count, updated_count


@shared_task(bind=True, max_retries=0)
def run_analysis_task(self, run_id):
    """
    저장된 분석 실행을 처리하는 태스크 (audit --async)

    Args:
        self: Celery 작업 인스턴스 (bind=True로 인해 자동 전달)
        run_id: 처리할 AnalysisRun ID
    """
    try:
        run = AnalysisRun.objects.get(id=run_id)
    except AnalysisRun.DoesNotExist:
        print(f"분석 실행 {run_id}를 찾을 수 없습니다.")
        return

    print("=" * 20)
    print(f"분석 시작: #{run.id} {run.verb}")
    print("=" * 20)

    config = RunConfig.from_dict(run.config)
    result = _analysis_worker(config, RunProgress(run.id, run.verb))
    if not result['success']:
        mark_run_as_failed(run_id, result['error'])
        return

    with transaction.atomic():
        run = AnalysisRun.objects.select_for_update().get(id=run_id)
        run.report = result['report']
        run.exit_code = result['exit_code']
        run.status = 'completed'
        run.save()

    print("=" * 20)
    print(f"분석 완료: #{run.id} (총 {result['elapsed_sec']:.2f}초)")
    print("=" * 20)
