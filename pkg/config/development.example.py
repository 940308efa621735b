import os

DEBUG = True
LOGFILE = os.environ.get('GATEOPT_DEV_LOGFILE')
LOG_LEVEL = 'DEBUG'
