import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from equilibria.exceptions import InvalidParametersError
from equilibria.games import load_game
from equilibria.models import AnalysisRun
from equilibria.services import RunConfig, parse_r_grid, run_verb
from equilibria.welfare import is_consensus_game

TREMBLING = str(settings.BASE_DIR / 'games' / 'trembling.json')


def run_command(*args, **options):
    out = StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


class VerifyCommandTests(TestCase):
    def test_up_left_report(self):
        output = run_command('verify', TREMBLING, profile='p0:Up;p1:Left', r=0.1, metric='linf', expect='W,SD')
        report = json.loads(output)
        self.assertEqual(report['schema'], 'dbeq/1')
        self.assertEqual(report['exit_code'], 0)
        self.assertTrue(all(report['result']['flags'][n] for n in ('W', 'B', 'WR', 'U', 'D', 'SD')))
        self.assertEqual(report['game']['name'], 'trembling-hand')
        self.assertEqual(report['result']['lattice_repairs'], {})
        self.assertEqual(report['result']['players'][0]['lattice_repairs'], [])

    def test_failed_expectation_exits_one_after_report(self):
        out = StringIO()
        with self.assertRaises(CommandError) as cm:
            call_command('verify', 'trembling', profile='p0:Down;p1:Right', r=0.1, metric='linf',
                         expect='W', stdout=out)
        self.assertEqual(cm.exception.returncode, 1)
        report = json.loads(out.getvalue())
        self.assertFalse(report['result']['flags']['W'])
        self.assertTrue(report['result']['flags']['B'])
        self.assertEqual(report['exit_code'], 1)

    def test_output_is_deterministic(self):
        first = run_command('verify', 'trembling', profile='p0:0.3,0.7;p1:Left', r=0.1, metric='l2')
        second = run_command('verify', 'trembling', profile='p0:0.3,0.7;p1:Left', r=0.1, metric='l2')
        self.assertEqual(first, second)

    def test_table_format(self):
        output = run_command('verify', 'trembling', profile='p0:Up;p1:Left', r=0.1, metric='linf',
                             format='table')
        self.assertTrue(output.startswith('player'))

    def test_missing_game_file_exits_two(self):
        with self.assertRaises(CommandError) as cm:
            run_command('verify', 'games/does-not-exist.json', profile='p0:Up;p1:Left')
        self.assertEqual(cm.exception.returncode, 2)

    def test_bad_profile_exits_two(self):
        with self.assertRaises(CommandError) as cm:
            run_command('verify', 'trembling', profile='p0:Up')
        self.assertEqual(cm.exception.returncode, 2)

    def test_out_and_save(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'report.json'
            output = run_command('verify', 'trembling', profile='p0:Up;p1:Left', r=0.1, metric='linf',
                                 out=str(path), save=True)
            report = json.loads(path.read_text(encoding='utf-8'))
        self.assertIn('report.json', output)
        run = AnalysisRun.objects.get()
        self.assertEqual(run.status, 'completed')
        self.assertEqual(run.exit_code, 0)
        self.assertEqual(run.report, report)


class OtherCommandTests(TestCase):
    def test_enumerate_pennies(self):
        report = json.loads(run_command('enumerate', 'pennies', supports=True))
        self.assertEqual(report['result']['count'], 0)
        mixed = report['result']['support_enumeration']
        self.assertEqual(len(mixed), 1)
        self.assertEqual(mixed[0]['profile'], [[0.5, 0.5], [0.5, 0.5]])

    def test_search_rejects_bad_resolution(self):
        with self.assertRaises(CommandError) as cm:
            run_command('search', 'pennies', resolution=0.3)
        self.assertEqual(cm.exception.returncode, 2)

    def test_robust_exit_codes(self):
        report = json.loads(run_command('robust', 'trembling', profile='p0:Up;p1:Left', epsilon=0.1))
        self.assertTrue(report['result']['robust'])
        with self.assertRaises(CommandError) as cm:
            run_command('robust', 'trembling', profile='p0:Down;p1:Right', epsilon=0.1)
        self.assertEqual(cm.exception.returncode, 1)

    def test_ladder(self):
        report = json.loads(run_command('ladder', 'trembling', profile='p0:Down;p1:Right', rungs=20))
        self.assertEqual(report['result']['verdict'], 'REFUTED')
        self.assertFalse(report['result']['undominated_nash']['perfect'])

    def test_sweep_csv(self):
        output = run_command('sweep', 'staghunt', profile='p0:Stag;p1:Stag', notion='W', r_grid='0:1:0.1',
                             metric='linf', format='csv')
        lines = output.strip().split('\n')
        self.assertEqual(lines[0], 'r,is_W')
        self.assertEqual(len(lines), 12)
        self.assertEqual(lines[6], '0.5,true')
        self.assertEqual(lines[7], '0.6,false')

    def test_oracle_records_reference_discrepancy(self):
        with self.assertLogs('equilibria.services', level='WARNING'):
            output = run_command('oracle', 'staghunt', profile='p0:Hare;p1:Hare', claim_notion='W',
                                 metric='linf', hi=0.5)
        result = json.loads(output)['result']
        self.assertEqual(result['threshold'], 0.5)
        self.assertAlmostEqual(result['reference_claim'], 1 / 3)
        self.assertTrue(result['exact_check']['below']['holds'])

    def test_poa_nash(self):
        result = json.loads(run_command('poa', 'trembling'))['result']
        self.assertEqual(result['status'], 'ok')
        self.assertEqual(result['poa'], 2.0)

    def test_delta_requires_positive_payoffs(self):
        with self.assertRaises(CommandError) as cm:
            run_command('delta', 'trembling', r=0.1)
        self.assertEqual(cm.exception.returncode, 2)

    def test_smoothness(self):
        result = json.loads(run_command('smoothness', 'prisoners'))['result']
        self.assertEqual(result['status'], 'ok')
        self.assertGreater(result['lambda'], 0)

    def test_consensus_without_game(self):
        result = json.loads(run_command('consensus', metric='linf'))['result']
        self.assertTrue(result['passed'])
        self.assertEqual(result['smoothness']['source'], 'fit')
        self.assertTrue(result['smoothness']['holds'])
        # 적합한 쌍의 한계 λ/(1+μ)는 내쉬 PoA의 역수 1/2를 넘을 수 없습니다
        self.assertLessEqual(result['smoothness']['bound'], 0.5 + 1e-6)
        self.assertEqual(result['poa_d']['poa'], 1.0)
        self.assertEqual(result['poa_nash']['poa'], 2.0)

    def test_consensus_checks_requested_smoothness_pair(self):
        result = json.loads(run_command('consensus', metric='linf', smooth_lambda=1.0, smooth_mu=1.0))['result']
        self.assertEqual(result['smoothness']['source'], 'given')
        self.assertEqual((result['smoothness']['lambda'], result['smoothness']['mu']), (1.0, 1.0))
        self.assertTrue(result['smoothness']['holds'])

        result = json.loads(run_command('consensus', metric='linf', smooth_lambda=10.0, smooth_mu=0.0))['result']
        self.assertFalse(result['smoothness']['holds'])
        self.assertLess(result['smoothness']['min_residual'], 0)

    def test_consensus_smoothness_pair_needs_both_values(self):
        with self.assertRaises(CommandError) as cm:
            run_command('consensus', metric='linf', smooth_lambda=1.0)
        self.assertEqual(cm.exception.returncode, 2)

    def test_consensus_saves_generated_game(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'consensus.json'
            run_command('consensus', players=3, actions='2', c_prime=3.0, metric='linf',
                        save_game=str(path))
            game = load_game(path)
        self.assertEqual(is_consensus_game(game), (1.0, 3.0, (0, 0, 0)))


class AuditCommandTests(TestCase):
    def test_small_audit(self):
        result = json.loads(run_command('audit', num_games=3, radii='0,0.1', metric='linf'))['result']
        self.assertEqual(result['violation_count'], 0)
        self.assertTrue(result['non_entailment_witness']['confirmed'])

    def test_audit_rejects_radius_flag(self):
        with self.assertRaises(CommandError) as cm:
            run_command('audit', r=0.1)
        self.assertEqual(cm.exception.returncode, 2)

    def test_async_enqueues_processing_run(self):
        with patch('equilibria.tasks.run_analysis_task.delay') as delay:
            output = run_command('audit', num_games=2, run_async=True)
        run = AnalysisRun.objects.get()
        self.assertEqual(run.status, 'processing')
        self.assertEqual(run.config['params']['num_games'], 2)
        delay.assert_called_once_with(run.id)
        self.assertIn(f'#{run.id}', output)


class RunConfigTests(TestCase):
    def test_foreign_parameter_names_owner(self):
        config = RunConfig(verb='verify', game='trembling', params={'epsilon': 0.1})
        with self.assertRaises(InvalidParametersError) as cm:
            config.validate()
        self.assertIn('--epsilon', cm.exception.message)
        self.assertIn('robust', cm.exception.message)

    def test_round_trip_through_dict(self):
        config = RunConfig(verb='sweep', game='staghunt', metric='linf', params={'profile': 'p0:Stag;p1:Stag'})
        self.assertEqual(RunConfig.from_dict(config.as_dict()).as_dict(), config.as_dict())

    def test_r_grid_is_inclusive(self):
        self.assertEqual(parse_r_grid('0:0.3:0.1'), [0.0, 0.1, 0.2, 0.3])
        with self.assertRaises(InvalidParametersError):
            parse_r_grid('0.5:0.1:0.1')

    def test_run_verb_with_plain_map(self):
        config = RunConfig(verb='enumerate', game='trembling', metric='linf', radii=0.1, params={'notion': 'W'})
        result = run_verb(config, mapper=map)
        self.assertEqual(result.report['result']['equilibria'][0]['labels'], ['Up', 'Left'])
        self.assertEqual(result.exit_code, 0)
