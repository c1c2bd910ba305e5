"""
Command-line front end
census, constants, tables, verify and predict, with deterministic CSV/JSON output.
Progress goes to stderr through the logger; stdout carries only results.
"""
import argparse
import csv
import io
import json
import sys
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import BaseModel, ValidationError, model_validator

from primebias import __version__
from primebias.config import config
from primebias.core.bias_constants import BiasReport, bias_bounds, c_k, check_even_k
from primebias.core.errors import DomainError, PrimeBiasError, UsageError, VerificationError
from primebias.core.pair_census import CSV_HEADER, CensusScope, ScopeMode, census_many, predicted_count
from primebias.core.tables import write_tables
from primebias.core.verification import run_checks
from primebias.utils.formatting import decimal_string, table_number
from primebias.utils.logger import get_logger

logger = get_logger(__name__)

PREDICT_HEADER = ('k', 'x', 'pair_count', 'c_k', 'predicted', 'ratio')


class Command(str, Enum):
    CENSUS = 'census'
    CONSTANTS = 'constants'
    TABLES = 'tables'
    VERIFY = 'verify'
    PREDICT = 'predict'


class OutputFormat(str, Enum):
    CSV = 'csv'
    JSON = 'json'


class RunConfig(BaseModel):
    command: Command
    k_list: List[int] = []
    scope: Optional[CensusScope] = None
    cutoff_r: int = config.CUTOFF_R
    cutoff_euler: int = config.CUTOFF_EULER
    output_format: Optional[OutputFormat] = None
    output_path: Optional[Path] = None
    thread_count: int = config.THREADS
    scale: int = config.TABLE1_SCALE
    full: bool = False

    @model_validator(mode='after')
    def _check_run(self):
        if self.command in (Command.CENSUS, Command.CONSTANTS, Command.PREDICT) and not self.k_list:
            raise ValueError(f"{self.command.value} needs --k")
        if self.command in (Command.CENSUS, Command.PREDICT) and self.scope is None:
            raise ValueError(f"{self.command.value} needs --up-to or --first-primes")
        # the N-th prime is >= 3 once N >= 2
        if self.command is Command.PREDICT and self.scope.mode is ScopeMode.FIRST_N_PRIMES \
                and self.scope.bound < 2:
            raise ValueError("predict needs a scope reaching x >= 3, use --first-primes 2 or more")
        if self.command is Command.CONSTANTS and self.output_format is OutputFormat.CSV:
            raise ValueError("constants are reported as JSON only")
        if self.thread_count < 1:
            raise ValueError("--threads must be >= 1")
        if self.scale < 1:
            raise ValueError("--scale must be >= 1")
        return self

    @property
    def fmt(self) -> OutputFormat:
        if self.output_format is not None:
            return self.output_format
        return OutputFormat.JSON if self.command is Command.CONSTANTS else OutputFormat.CSV


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_k_list(text: str) -> List[int]:
    """'2,4,10' or ranges 'a..b:step' (step defaults to 2), mixed freely"""
    values: List[int] = []
    for item in text.split(','):
        item = item.strip()
        if not item:
            continue
        try:
            if '..' in item:
                span, _, step = item.partition(':')
                start, stop = (int(v) for v in span.split('..', 1))
                step_value = int(step) if step else 2
                if step_value < 1:
                    raise UsageError(f"range step must be positive in {item!r}")
                values.extend(range(start, stop + 1, step_value))
            else:
                values.append(int(item))
        except ValueError:
            raise UsageError(f"cannot read k list item {item!r}")
    for k in values:
        try:
            check_even_k(k)
        except DomainError as e:
            raise UsageError(str(e))
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog='primebias',
        description='Primitive-root bias toolkit for prime pairs p, p+k',
    )
    parser.add_argument('command', choices=[c.value for c in Command])
    parser.add_argument('--k', dest='k', default='', help="k values: '2,4' or '2..120:2'")
    scope = parser.add_mutually_exclusive_group()
    scope.add_argument('--first-primes', type=int, dest='first_primes', help='p among the first N primes')
    scope.add_argument('--up-to', type=int, dest='up_to', help='p <= x')
    parser.add_argument('--cutoff-r', type=int, dest='cutoff_r', default=config.CUTOFF_R)
    parser.add_argument('--cutoff-euler', type=int, dest='cutoff_euler', default=config.CUTOFF_EULER)
    parser.add_argument('--scale', type=int, default=config.TABLE1_SCALE, help='N for table 1')
    parser.add_argument('--full', action='store_true', help='full-scale table 1 and census checks')
    parser.add_argument('--format', choices=[f.value for f in OutputFormat], dest='output_format')
    parser.add_argument('--out', dest='output_path', help='output file (directory for tables)')
    parser.add_argument('--threads', type=int, dest='thread_count', default=config.THREADS)
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    """argv (without the program name) -> validated RunConfig; UsageError on anything invalid"""
    args = _build_parser().parse_args(list(argv))
    try:
        scope = None
        if args.first_primes is not None:
            scope = CensusScope.first_primes(args.first_primes)
        elif args.up_to is not None:
            scope = CensusScope.up_to(args.up_to)
        return RunConfig(
            command=Command(args.command),
            k_list=parse_k_list(args.k),
            scope=scope,
            cutoff_r=args.cutoff_r,
            cutoff_euler=args.cutoff_euler,
            output_format=args.output_format,
            output_path=args.output_path,
            thread_count=args.thread_count,
            scale=args.scale,
            full=args.full,
        )
    except ValidationError as e:
        raise UsageError(f"invalid arguments: {e.errors()[0]['msg']}")


def _csv_text(header: Sequence[str], rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + '\n'


def rounded_fields(report: BiasReport) -> dict:
    """The report's scalars at table precision"""
    fields = {'c_k': table_number(report.c_k.value)}
    if report.q_set is not None:
        fields.update(
            l_k=table_number(report.l_k),
            r_k=table_number(report.r_k.value),
            bound_biased=table_number(report.bound_biased),
            r_k_prime=table_number(report.r_k_prime.value),
            bound_reversed=table_number(report.bound_reversed),
        )
    else:
        fields.update(
            l_minus=table_number(report.l_minus),
            r_minus=table_number(report.r_minus.value),
            bound_neg=table_number(report.bound_neg),
            l_plus=table_number(report.l_plus),
            r_plus=table_number(report.r_plus.value),
            bound_pos=table_number(report.bound_pos),
        )
    return fields


def _run_census(run_config: RunConfig) -> str:
    results = census_many(run_config.k_list, run_config.scope, threads=run_config.thread_count)
    if run_config.fmt is OutputFormat.JSON:
        return _json_text([r.model_dump(mode='json') for r in results])
    return _csv_text(CSV_HEADER, [r.csv_row() for r in results])


def _run_constants(run_config: RunConfig) -> str:
    payload = []
    for k in run_config.k_list:
        report = bias_bounds(k, run_config.cutoff_r, run_config.cutoff_euler)
        entry = report.model_dump(mode='json', exclude_none=True)
        entry['rounded'] = rounded_fields(report)
        payload.append(entry)
    return _json_text(payload)


def _run_predict(run_config: RunConfig) -> str:
    x = run_config.scope.max_prime()
    results = census_many(run_config.k_list, run_config.scope, threads=run_config.thread_count)
    rows = []
    for result in results:
        constant = c_k(result.k, run_config.cutoff_euler).value
        predicted = predicted_count(result.k, x, float(constant))
        rows.append({
            'k': result.k,
            'x': x,
            'pair_count': result.pair_count,
            'c_k': decimal_string(constant),
            'predicted': decimal_string(predicted),
            'ratio': decimal_string(result.pair_count / predicted),
        })
    if run_config.fmt is OutputFormat.JSON:
        return _json_text(rows)
    return _csv_text(PREDICT_HEADER, [tuple(row[c] for c in PREDICT_HEADER) for row in rows])


def _run_verify(run_config: RunConfig) -> str:
    results = run_checks(run_config.cutoff_r, run_config.cutoff_euler,
                         full=run_config.full, threads=run_config.thread_count)
    failed = [r.criterion for r in results if not r.passed]
    if run_config.fmt is OutputFormat.JSON:
        text = _json_text([r.model_dump() for r in results])
    else:
        text = ''.join(r.summary_line() + '\n' for r in results)
    if failed:
        raise VerificationError(f"failed criteria: {failed}", text)
    return text


def _emit(text: str, output_path: Optional[Path]) -> None:
    if output_path is None:
        sys.stdout.write(text)
        return
    try:
        output_path.write_text(text, encoding='utf-8')
    except BaseException:
        output_path.unlink(missing_ok=True)
        raise


def run(run_config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    logger.info(f"primebias {run_config.command.value} k={run_config.k_list or '-'}")

    if run_config.command is Command.TABLES:
        written: List[Path] = []
        n_primes = config.TABLE1_FULL if run_config.full else run_config.scale
        try:
            write_tables(run_config.output_path or Path('.'), n_primes, run_config.thread_count,
                         run_config.cutoff_r, run_config.cutoff_euler, written=written)
        except BaseException:
            for path in written:
                path.unlink(missing_ok=True)
            raise
        return 0

    handlers = {
        Command.CENSUS: _run_census,
        Command.CONSTANTS: _run_constants,
        Command.PREDICT: _run_predict,
        Command.VERIFY: _run_verify,
    }
    try:
        text = handlers[run_config.command](run_config)
    except VerificationError as e:
        # The summary is still the command's output
        _emit(e.args[1], run_config.output_path)
        raise
    _emit(text, run_config.output_path)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(parse_config(argv))
    except PrimeBiasError as e:
        sys.stderr.write(f"primebias: {e.args[0] if e.args else e}\n")
        return e.exit_code
    except ValueError as e:
        sys.stderr.write(f"primebias: {e}\n")
        return 1
