"""
Table builders
Each builder returns (header, rows) with every cell already formatted as text;
write_tables() renders them as CSV files table1.csv .. table5.csv.
"""
import csv
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from primebias.config import config
from primebias.core.bias_constants import bias_bounds, c_k
from primebias.core.pair_census import CensusScope, census_many
from primebias.utils.formatting import round_places, round_significant, table_number
from primebias.utils.logger import get_logger

logger = get_logger(__name__)

Table = Tuple[Sequence[str], List[Sequence[str]]]

TABLE1_K = list(range(2, 121, 2))
TABLE2_K = list(range(2, 121, 2))
TABLE3_K = list(range(2, 165, 6))
TABLE4_K = list(range(4, 185, 6))
TABLE5_K = list(range(6, 157, 6))


def _primes_cell(primes: Sequence[int]) -> str:
    return ' '.join(str(q) for q in primes)


def table1(n_primes: Optional[int] = None, threads: int = 1, k_list: Sequence[int] = TABLE1_K) -> Table:
    """Pairs among the first N primes where p has fewer primitive roots than p+k"""
    n_primes = n_primes or config.TABLE1_SCALE
    logger.info(f"Table 1 over the first {n_primes:,} primes")
    results = census_many(k_list, CensusScope.first_primes(n_primes), threads=threads)
    rows = []
    for result in results:
        share = result.t_neg / result.pair_count if result.pair_count else 0
        rows.append((str(result.k), str(result.t_neg), str(result.pair_count),
                     f"{round_places(share, 6):f}"))
    return ('k', 't_neg_count', 'pair_count', 'proportion'), rows


def table2(euler_cutoff: Optional[int] = None, k_list: Sequence[int] = TABLE2_K) -> Table:
    rows = [(str(k), str(round_significant(c_k(k, euler_cutoff).value, 6))) for k in k_list]
    return ('k', 'c_k'), rows


def _skewed_table(k_list: Sequence[int], cutoff: Optional[int], euler_cutoff: Optional[int]) -> Table:
    header = ('k', 'q_set', 'l_k', 'r_k', 'bound_biased', 'r_k_prime', 'bound_reversed')
    rows = []
    for k in k_list:
        report = bias_bounds(k, cutoff, euler_cutoff)
        rows.append((
            str(k),
            _primes_cell(report.q_set.primes),
            table_number(report.l_k),
            table_number(report.r_k.value),
            table_number(report.bound_biased),
            table_number(report.r_k_prime.value),
            table_number(report.bound_reversed),
        ))
        logger.debug(f"k={k}: Q={report.q_set.primes}")
    return header, rows


def table3(cutoff: Optional[int] = None, euler_cutoff: Optional[int] = None,
           k_list: Sequence[int] = TABLE3_K) -> Table:
    """k = 2 mod 6, where chi3(k) = -1"""
    return _skewed_table(k_list, cutoff, euler_cutoff)


def table4(cutoff: Optional[int] = None, euler_cutoff: Optional[int] = None,
           k_list: Sequence[int] = TABLE4_K) -> Table:
    """k = 4 mod 6, where chi3(k) = 1"""
    return _skewed_table(k_list, cutoff, euler_cutoff)


def table5(cutoff: Optional[int] = None, euler_cutoff: Optional[int] = None,
           k_list: Sequence[int] = TABLE5_K) -> Table:
    header = ('k', 'q_minus', 'l_minus', 'r_minus', 'bound_neg',
              'q_plus', 'l_plus', 'r_plus', 'bound_pos')
    rows = []
    for k in k_list:
        report = bias_bounds(k, cutoff, euler_cutoff)
        rows.append((
            str(k),
            _primes_cell(report.q_minus.primes),
            table_number(report.l_minus),
            table_number(report.r_minus.value),
            table_number(report.bound_neg),
            _primes_cell(report.q_plus.primes),
            table_number(report.l_plus),
            table_number(report.r_plus.value),
            table_number(report.bound_pos),
        ))
    return header, rows


def write_csv(path: Path, table: Table) -> Path:
    header, rows = table
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_tables(directory: Path, n_primes: Optional[int] = None, threads: int = 1,
                 cutoff: Optional[int] = None, euler_cutoff: Optional[int] = None,
                 written: Optional[List[Path]] = None) -> List[Path]:
    """
    Write table1.csv .. table5.csv into directory.

    Paths are appended to `written` as soon as each file is opened, so a caller
    can clean up after a failure part-way through.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = [] if written is None else written
    builders: Dict[str, Callable[[], Table]] = {
        'table1.csv': lambda: table1(n_primes, threads),
        'table2.csv': lambda: table2(euler_cutoff),
        'table3.csv': lambda: table3(cutoff, euler_cutoff),
        'table4.csv': lambda: table4(cutoff, euler_cutoff),
        'table5.csv': lambda: table5(cutoff, euler_cutoff),
    }
    for name, build in builders.items():
        table = build()
        path = directory / name
        written.append(path)
        write_csv(path, table)
        logger.info(f"✓ Wrote {path} ({len(table[1])} rows)")
    return written
