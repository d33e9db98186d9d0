import traceback
from typing import Optional

from fastapi import APIRouter, HTTPException, Query
from fastapi.concurrency import run_in_threadpool
from loguru import logger

from app.config import get_settings
from app.exceptions import ServiceError
from app.models.report import AnalysisReport, GameSpecFile
from app.services.analysis_service import AnalysisService

router = APIRouter()
settings = get_settings()
analysis_service = AnalysisService(settings)


@router.post("/solve", response_model=AnalysisReport)
async def solve_game(spec: GameSpecFile):
    try:
        return await run_in_threadpool(analysis_service.analyze, spec)
    except ServiceError as e:
        logger.error(f"Service error during solve: {str(e)}\nTraceback: {''.join(traceback.format_tb(e.__traceback__))}")
        raise HTTPException(status_code=e.status_code, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected error during solve: {str(e)}\nTraceback: {''.join(traceback.format_tb(e.__traceback__))}")
        raise HTTPException(status_code=500, detail=str(e))


@router.post("/oracle", response_model=AnalysisReport)
async def oracle_game(
    spec: GameSpecFile,
    resolution: Optional[int] = Query(None, ge=8),
    epsilon: Optional[float] = Query(None, ge=0),
):
    try:
        return await run_in_threadpool(analysis_service.analyze_with_oracle, spec, resolution, epsilon)
    except ServiceError as e:
        logger.error(f"Service error during oracle run: {str(e)}\nTraceback: {''.join(traceback.format_tb(e.__traceback__))}")
        raise HTTPException(
            status_code=e.status_code,
            detail={
                "error": type(e).__name__,
                "message": str(e),
                "coefficients": spec.c,
            }
        )
    except Exception as e:
        logger.error(f"Unexpected error during oracle run: {str(e)}\nTraceback: {''.join(traceback.format_tb(e.__traceback__))}")
        raise HTTPException(status_code=500, detail=str(e))
