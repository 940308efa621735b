import logging
import os
from logging.handlers import RotatingFileHandler

from flask import Flask

logger = logging.getLogger('gateopt')

CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, os.pardir, 'config')


def create_app(config_name, config_file=None):
    """Create the application for a configuration mode.

    The defaults in `config/default.py` are always loaded. The file `config/<config_name>.py` is loaded on top of
    them if it exists, so that a mode only has to list the settings it changes. Pass `config_file` to load another
    file instead, which must exist.

    Params:
    -------
    config_name : str
        Configuration mode, such as 'development', 'testing' or 'production'.
    config_file : str, optional
        Configuration file replacing `config/<config_name>.py`.

    Returns:
    --------
    flask.Flask
        The application. Its command line interface carries the gate assignment commands.
    """

    app = Flask(__name__)
    app.config.from_pyfile(os.path.join(CONFIG_DIR, 'default.py'))
    if config_file:
        app.config.from_pyfile(os.path.abspath(config_file))
    else:
        app.config.from_pyfile(os.path.join(CONFIG_DIR, config_name + '.py'), silent=True)

    # set up logging
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    formatter = logging.Formatter('%(asctime)s %(levelname)s: %(message)s '
                                  '[in %(pathname)s:%(lineno)d]')
    if app.debug:
        handler = logging.StreamHandler()
        handler.setLevel(logging.DEBUG)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.setLevel(logging.DEBUG)
    else:
        if app.config.get('LOGFILE'):
            file_handler = RotatingFileHandler(app.config['LOGFILE'], maxBytes=100000, backupCount=10)
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        logger.setLevel(app.config.get('LOG_LEVEL', 'INFO'))

    from .main import main as main_blueprint
    app.register_blueprint(main_blueprint)

    return app
