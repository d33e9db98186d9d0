from fastapi import FastAPI
from loguru import logger

from app import __version__
from app.controllers.game_controller import router as game_router

app = FastAPI(title="qgame", version=__version__)

# Register routers
app.include_router(game_router, prefix="/games")


@app.get("/health")
async def health():
    return {"status": "ok", "version": __version__}


@app.on_event("startup")
async def startup_event():
    logger.info("Application started successfully")
