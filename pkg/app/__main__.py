from app.controllers.cli_controller import qgame

qgame()
