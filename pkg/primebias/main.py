"""
FastAPI Application for the prime-pair bias toolkit
Read-only JSON endpoints over census, constants and prediction
"""
from typing import Optional

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from primebias import __version__
from primebias.cli import rounded_fields
from primebias.config import config
from primebias.core.bias_constants import bias_bounds, c_k
from primebias.core.errors import PrimeBiasError
from primebias.core.pair_census import CensusScope, census, predicted_count
from primebias.utils.formatting import decimal_string
from primebias.utils.logger import get_logger

logger = get_logger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Prime Pair Bias Toolkit",
    description="Primitive-root count biases for prime pairs p, p+k",
    version=__version__
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _error(message: str) -> dict:
    return {
        "status": "error",
        "message": message
    }


def _scope(up_to: Optional[int], first_primes: Optional[int]) -> CensusScope:
    if (up_to is None) == (first_primes is None):
        raise PrimeBiasError("give exactly one of up_to or first_primes")
    bound = up_to if up_to is not None else first_primes
    if bound > config.API_MAX_BOUND:
        raise PrimeBiasError(f"scope {bound} exceeds API limit {config.API_MAX_BOUND}")
    if up_to is not None:
        return CensusScope.up_to(up_to)
    return CensusScope.first_primes(first_primes)


def _cutoff(name: str, value: Optional[int]) -> Optional[int]:
    if value is not None and value > config.API_MAX_CUTOFF:
        raise PrimeBiasError(f"{name} {value} exceeds API limit {config.API_MAX_CUTOFF}")
    return value


@app.get("/api/health")
async def health_check():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "version": __version__,
        "max_bound": config.API_MAX_BOUND,
        "max_cutoff": config.API_MAX_CUTOFF
    }


@app.get("/api/census")
def census_endpoint(k: int, up_to: Optional[int] = None, first_primes: Optional[int] = None):
    """Sign census of T(p) and S(p) for one k"""
    logger.info(f"Census request k={k} up_to={up_to} first_primes={first_primes}")
    try:
        result = census(k, _scope(up_to, first_primes))
        return {
            "status": "success",
            "census": result.model_dump(mode="json")
        }
    except (PrimeBiasError, ValueError) as e:
        logger.error(f"Census request failed: {e}")
        return _error(str(e))


@app.get("/api/constants")
def constants_endpoint(k: int, cutoff_r: Optional[int] = None, cutoff_euler: Optional[int] = None):
    """C_k, Q, L, R and the conditional lower densities for one k"""
    try:
        report = bias_bounds(k, _cutoff("cutoff_r", cutoff_r), _cutoff("cutoff_euler", cutoff_euler))
        return {
            "status": "success",
            "report": report.model_dump(mode="json", exclude_none=True),
            "rounded": rounded_fields(report)
        }
    except (PrimeBiasError, ValueError) as e:
        logger.error(f"Constants request failed: {e}")
        return _error(str(e))


@app.get("/api/predict")
def predict_endpoint(k: int, up_to: int, cutoff_euler: Optional[int] = None):
    """Empirical pi_k(x) next to C_k x / (log x)^2"""
    try:
        cutoff_euler = _cutoff("cutoff_euler", cutoff_euler)
        result = census(k, _scope(up_to, None))
        constant = c_k(k, cutoff_euler).value
        predicted = predicted_count(k, up_to, float(constant))
        return {
            "status": "success",
            "k": k,
            "x": up_to,
            "pair_count": result.pair_count,
            "c_k": decimal_string(constant),
            "predicted": decimal_string(predicted),
            "ratio": decimal_string(result.pair_count / predicted)
        }
    except (PrimeBiasError, ValueError) as e:
        logger.error(f"Predict request failed: {e}")
        return _error(str(e))


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        app,
        host='0.0.0.0',
        port=8000,
        log_level='info'
    )
