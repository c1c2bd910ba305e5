import pytest
from fastapi.testclient import TestClient

from primebias.config import config
from primebias.main import app

client = TestClient(app)


def test_health():
    response = client.get('/api/health')
    assert response.status_code == 200
    assert response.json()['status'] == 'healthy'


def test_census():
    body = client.get('/api/census', params={'k': 2, 'up_to': 100}).json()
    assert body['status'] == 'success'
    assert body['census']['pair_count'] == 8
    assert body['census']['t_neg'] == 1


def test_census_first_primes():
    body = client.get('/api/census', params={'k': 2, 'first_primes': 25}).json()
    assert body['census']['pair_count'] == 8


@pytest.mark.parametrize('params', [
    {'k': 3, 'up_to': 100},
    {'k': 2},
    {'k': 2, 'up_to': 100, 'first_primes': 10},
    {'k': 2, 'up_to': 2},
])
def test_census_errors(params):
    body = client.get('/api/census', params=params).json()
    assert body['status'] == 'error'
    assert body['message']


def test_census_above_api_limit():
    body = client.get('/api/census', params={'k': 2, 'up_to': config.API_MAX_BOUND + 1}).json()
    assert body['status'] == 'error'


def test_constants(desk_cutoffs):
    body = client.get('/api/constants', params={'k': 6}).json()
    assert body['status'] == 'success'
    assert body['report']['q_minus']['primes'] == [5]
    assert body['report']['q_plus']['primes'] == [7]
    assert abs(float(body['rounded']['bound_neg']) - 0.233372) < 1e-5


def test_predict(desk_cutoffs):
    body = client.get('/api/predict', params={'k': 2, 'up_to': 10_000}).json()
    assert body['pair_count'] == 205
    assert 0.8 < float(body['ratio']) < 1.6


@pytest.mark.parametrize('path,params', [
    ('/api/constants', {'k': 2, 'cutoff_euler': 10 ** 12}),
    ('/api/constants', {'k': 2, 'cutoff_r': 10 ** 12}),
    ('/api/predict', {'k': 2, 'up_to': 1000, 'cutoff_euler': 10 ** 12}),
])
def test_series_cutoff_above_api_limit(monkeypatch, path, params):
    def unreachable(*args, **kwargs):
        raise AssertionError('series evaluated past the API limit')

    monkeypatch.setattr('primebias.main.bias_bounds', unreachable)
    monkeypatch.setattr('primebias.main.c_k', unreachable)
    body = client.get(path, params=params).json()
    assert body['status'] == 'error'
    assert 'exceeds API limit' in body['message']
