import io
import json

import pytest

from fmapow import cli

WORST = '1.0100010111101011011011101010011111100101000111011101'


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def body(text):
    return [l for l in text.splitlines() if not l.startswith('#')]


def test_header_is_first_line():
    code, text = run('pow', '--x', '3', '--n', '5', '--work', '53', '--target', '53')
    assert code == 0
    first = text.splitlines()[0]
    assert first.startswith('# fmapow pow ')
    assert json.loads(first.split(' ', 3)[3])['work'] == 53


def test_pow_exact():
    code, text = run('pow', '--x', '3', '--n', '5', '--work', '53', '--target', '53',
                     '--format', 'json')
    rep = json.loads(body(text)[0])
    assert code == 0
    assert rep['result_decimal'] == '243' and rep['position'] == 'exact'
    assert rep['correctly_rounded'] is True


def test_pow_worst_case():
    code, text = run('pow', '--x', WORST, '--n', '51', '--work', '64', '--target', '53',
                     '--format', 'json')
    rep = json.loads(body(text)[0])
    assert code == 0
    assert rep['correctly_rounded'] is True and rep['margin_certified'] is True
    assert (rep['rounding_bit'], rep['run_len']) == (1, 59)
    assert rep['position'] == 'above_mid'


def test_pow_huge_n():
    code, text = run('pow', '--x', '0.1', '--n', '100000000', '--format', 'json')
    rep = json.loads(body(text)[0])
    assert code == 0 and rep['oracle'] == 'enclosure' and rep['faithful']
    assert rep['result_decimal'].endswith('E-100000000')
    assert 'rounded to nearest' in text.splitlines()[0]


def test_pow_usage_errors(capsys):
    assert run('pow', '--x', '1.5', '--n', '0')[0] == 2
    assert 'n must be >= 1' in capsys.readouterr().err
    assert run('pow', '--x', '1.5z', '--n', '3')[0] == 2
    assert 'position 3' in capsys.readouterr().err
    assert run('pow', '--x', '0b1.0000000000000000000000000000000000000000000000000000001',
               '--n', '3')[0] == 2
    assert run('pow', '--x', '-2', '--n', '3')[0] == 2
    assert run('pow', '--x', '1.5', '--n', '3', '--work', '53', '--target', '64')[0] == 2
    assert run('bogus')[0] == 2


def test_env_precision_defaults(monkeypatch):
    monkeypatch.setenv('FMAPOW_WORK_P', '30')
    monkeypatch.setenv('FMAPOW_TARGET_P', '20')
    code, text = run('pow', '--x', '1.5', '--n', '3')
    cfg = json.loads(text.splitlines()[0].split(' ', 3)[3])
    assert code == 0 and (cfg['work'], cfg['target']) == (30, 20)


@pytest.mark.parametrize('p,alg', [('53', 'logpower'), ('64', 'logpower'), ('53', 'linpower')])
def test_tables_diff_passes(p, alg):
    code, text = run('tables', '--p', p, '--alg', alg, '--diff')
    assert code == 0 and '# diff: 0 mismatches' in text


def test_tables_csv():
    code, text = run('tables', '--p', '53', '--alg', 'linpower', '--format', 'csv')
    assert body(text)[0] == 'n,neg_log2' and '3,104.00' in body(text)


def test_tables_errors():
    assert run('tables', '--alg', 'cubic')[0] == 2
    assert run('tables', '--p', '24', '--diff')[0] == 2


def test_verify_guard_and_force_flag(capsys):
    assert run('verify', '--p', '24', '--n', '3..20', '--exhaustive')[0] == 2
    assert 'use --force' in capsys.readouterr().err
    assert run('verify', '--p', '11', '--n', '3')[0] == 2


def test_verify_small_exhaustive(tmp_path):
    path = tmp_path / 'cases.jsonl'
    code, text = run('verify', '--p', '8', '--n', '3..12', '--exhaustive', '--format', 'json',
                     '--cases', str(path))
    summary = json.loads(body(text)[0])
    assert code == 0 and summary['log_bound_violations'] == 0 and summary['faithful_rate'] == 1.0
    # the summary is recomputable from the per-case lines
    from fmapow.sweeps import summarize
    records = [json.loads(l) for l in path.read_text().splitlines()]
    assert summarize(records, 8) == summary


def test_verify_byte_identical_across_jobs():
    args = ('verify', '--p', '20', '--n', '3..200', '--sample', '300', '--seed', '9')
    assert run(*args, '--jobs', '1')[1] == run(*args, '--jobs', '2')[1]


def test_worstcase_records_and_guard():
    code, text = run('worstcase', '--p', '8', '--n', '3..10')
    lines = body(text)
    assert code == 0 and len(lines) == 8
    assert json.loads(lines[0])['run_len'] == 7
    code, text = run('worstcase', '--p', '8', '--n', '1')
    assert json.loads(body(text)[0])['exact_everywhere'] is True
    assert run('worstcase', '--p', '40', '--n', '3')[0] == 2


def test_worstcase_byte_identical_across_jobs():
    args = ('worstcase', '--p', '11', '--n', '3..6')
    assert run(*args, '--jobs', '1')[1] == run(*args, '--jobs', '3')[1]


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, '-m', 'fmapow', 'tables', '--p', '53', '--diff'],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and '71.41' in proc.stdout
