from datetime import timedelta
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase
from django.utils import timezone

from equilibria.models import AnalysisRun
from equilibria.services import RunConfig
from equilibria.tasks import RunProgress, check_stale_runs, mark_run_as_failed, parallel_map, run_analysis_task


def make_run(config, status='processing'):
    return AnalysisRun.objects.create(
        verb=config.verb,
        game_name=config.game or config.verb,
        config=config.as_dict(),
        status=status,
    )


class ParallelMapTests(TestCase):
    def test_results_keep_input_order(self):
        self.assertEqual(parallel_map(lambda x: x * x, range(30), max_workers=4), [x * x for x in range(30)])

    def test_single_worker_and_empty_input(self):
        self.assertEqual(parallel_map(str, [1, 2], max_workers=1), ['1', '2'])
        self.assertEqual(parallel_map(str, []), [])

    def test_worker_exception_propagates(self):
        def explode(x):
            raise ValueError(x)

        with self.assertRaises(ValueError):
            parallel_map(explode, [1, 2, 3], max_workers=2)


class AnalysisTaskTests(TestCase):
    def test_completed_run_stores_report(self):
        config = RunConfig(verb='verify', game='trembling', metric='linf', radii=0.1,
                           params={'profile': 'p0:Up;p1:Left'})
        run = make_run(config)
        run_analysis_task(run.id)
        run.refresh_from_db()
        self.assertEqual(run.status, 'completed')
        self.assertEqual(run.exit_code, 0)
        self.assertTrue(run.report['result']['flags']['SD'])

    def test_failed_run_records_error(self):
        run = make_run(RunConfig(verb='verify', game='no-such-game', params={'profile': 'p0:Up;p1:Left'}))
        run_analysis_task(run.id)
        run.refresh_from_db()
        self.assertEqual(run.status, 'failed')
        self.assertIn('no-such-game', run.error_message)

    def test_missing_run_is_ignored(self):
        run_analysis_task(999999)
        self.assertFalse(AnalysisRun.objects.exists())

    def test_mark_failed_only_touches_processing_runs(self):
        run = make_run(RunConfig(verb='audit'), status='completed')
        mark_run_as_failed(run.id, '중단')
        run.refresh_from_db()
        self.assertEqual(run.status, 'completed')


class StaleRunTests(TestCase):
    def setUp(self):
        config = RunConfig(verb='audit', metric='linf', seed=7,
                           params={'num_games': 200, 'shape': '2x2', 'radii_set': '0.1'})
        self.old = make_run(config)
        AnalysisRun.objects.filter(id=self.old.id).update(
            created_at=timezone.now() - timedelta(minutes=90),
            progress={'stage': '감사 게임', 'pass': 1, 'done': 37, 'total': 200},
            progress_at=timezone.now() - timedelta(minutes=45),
        )
        self.fresh = make_run(RunConfig(verb='audit'))

    def test_dry_run_changes_nothing(self):
        self.assertEqual(check_stale_runs(minutes=30, dry_run=True), (1, 0))
        self.old.refresh_from_db()
        self.assertEqual(self.old.status, 'processing')

    def test_stale_run_records_interrupted_stage(self):
        self.assertEqual(check_stale_runs(minutes=30), (1, 1))
        self.old.refresh_from_db()
        self.fresh.refresh_from_db()
        self.assertEqual(self.old.status, 'failed')
        self.assertIn('감사 게임 37/200', self.old.error_message)
        self.assertIn('seed=7', self.old.error_message)
        self.assertIn('num_games=200', self.old.error_message)
        self.assertEqual(self.fresh.status, 'processing')

    def test_recent_progress_keeps_long_run_alive(self):
        # 90분 전에 시작했어도 진행 기록이 최근이면 살아 있는 실행입니다
        AnalysisRun.objects.filter(id=self.old.id).update(progress_at=timezone.now() - timedelta(minutes=2))
        self.assertEqual(check_stale_runs(minutes=30), (0, 0))

    def test_run_without_progress_falls_back_to_creation_time(self):
        AnalysisRun.objects.filter(id=self.fresh.id).update(created_at=timezone.now() - timedelta(minutes=60))
        self.assertEqual(check_stale_runs(minutes=30, dry_run=True), (2, 0))

    def test_verb_filter(self):
        self.assertEqual(check_stale_runs(minutes=30, verb='sweep'), (0, 0))
        self.assertEqual(check_stale_runs(minutes=30, verb='audit'), (1, 1))

    def test_command(self):
        out = StringIO()
        call_command('check_stale_runs', minutes=30, stdout=out)
        self.assertIn('1개의 실행', out.getvalue())
        self.assertEqual(str(AnalysisRun.objects.get(id=self.old.id).status), 'failed')

    def test_command_rejects_unknown_verb(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('check_stale_runs', verb='nope', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_str(self):
        self.assertIn('audit', str(self.fresh))
        self.assertIn(f'#{self.fresh.id}', str(self.fresh))


class RunProgressTests(TestCase):
    def test_progress_counts_finished_units(self):
        run = make_run(RunConfig(verb='sweep'))
        mapper = RunProgress(run.id, 'sweep', max_workers=2)
        self.assertEqual(mapper(lambda x: x + 1, range(5)), [1, 2, 3, 4, 5])
        run.refresh_from_db()
        self.assertEqual(run.progress, {'stage': '반지름 격자점', 'pass': 1, 'done': 5, 'total': 5})
        self.assertIsNotNone(run.progress_at)
        self.assertEqual(run.stage_text(), '반지름 격자점 5/5')

    def test_second_pass_is_numbered(self):
        run = make_run(RunConfig(verb='poa'))
        mapper = RunProgress(run.id, 'poa', max_workers=1)
        mapper(str, [1, 2])
        mapper(str, [1, 2, 3])
        run.refresh_from_db()
        self.assertEqual(run.progress['pass'], 2)
        self.assertIn('2번째 구간', run.stage_text())

    def test_failure_message_names_stage(self):
        run = make_run(RunConfig(verb='audit'))
        AnalysisRun.objects.filter(id=run.id).update(
            progress={'stage': '감사 게임', 'pass': 1, 'done': 3, 'total': 10})
        mark_run_as_failed(run.id, '워커 종료')
        run.refresh_from_db()
        self.assertEqual(run.error_message, '[감사 게임 3/10] 워커 종료')

    def test_async_audit_records_game_progress(self):
        config = RunConfig(verb='audit', metric='linf', seed=3,
                           params={'num_games': 2, 'shape': '2x2', 'radii_set': '0.1', 'scope': 'lattice'})
        run = make_run(config)
        run_analysis_task(run.id)
        run.refresh_from_db()
        self.assertEqual(run.status, 'completed')
        self.assertEqual(run.progress['stage'], '감사 게임')
        self.assertEqual((run.progress['done'], run.progress['total']), (2, 2))
        self.assertEqual(run.report['result']['scope'], ['lattice'])
