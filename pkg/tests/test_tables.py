from primebias.core import tables

from tests.conftest import EULER_CUTOFF, R_CUTOFF


def test_table1_rows():
    header, rows = tables.table1(n_primes=2000)
    assert tuple(header) == ('k', 't_neg_count', 'pair_count', 'proportion')
    assert [int(row[0]) for row in rows] == list(range(2, 121, 2))
    assert all(int(row[1]) <= int(row[2]) for row in rows)


def test_table2_rows():
    header, rows = tables.table2(EULER_CUTOFF, k_list=[2, 30, 98])
    assert rows == [('2', '1.32032'), ('30', '3.52086'), ('98', '1.58439')]


def _close_row(cells, expected):
    return all(abs(float(c) - e) <= 1e-5 for c, e in zip(cells, expected))


def test_table3_first_row():
    _, rows = tables.table3(R_CUTOFF, EULER_CUTOFF, k_list=[2])
    k, q, *numbers = rows[0]
    assert (k, q) == ('2', '5 7 11')
    assert _close_row(numbers, (0.067139, 0.025497, 0.004594, 0.141298, 0.651516))
    assert all(len(cell.split('.')[1]) == 6 for cell in numbers)


def test_table4_tiny_bound_is_scientific():
    _, rows = tables.table4(R_CUTOFF, EULER_CUTOFF, k_list=[10])
    assert rows[0][1] == '7 11 13 17 19 23'
    assert rows[0][4].endswith('e-08')


def test_table5_first_row():
    _, rows = tables.table5(R_CUTOFF, EULER_CUTOFF, k_list=[6])
    k, q_minus, l_minus, r_minus, bound_neg, q_plus, l_plus, r_plus, bound_pos = rows[0]
    assert (q_minus, q_plus) == ('5', '7')
    assert _close_row((l_minus, r_minus, bound_neg), (0.223144, 0.066917, 0.233372))
    assert _close_row((l_plus, r_plus, bound_pos), (0.154151, 0.110468, 0.056675))


def test_row_sets():
    assert len(tables.TABLE1_K) == 60
    assert tables.TABLE3_K[-1] == 164
    assert tables.TABLE4_K[-1] == 184
    assert tables.TABLE5_K[-1] == 156


def test_write_csv(tmp_path):
    path = tables.write_csv(tmp_path / 't.csv', (('k', 'c_k'), [('2', '1.32032')]))
    assert path.read_text() == 'k,c_k\n2,1.32032\n'
