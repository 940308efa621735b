import os

DEBUG = False
LOGFILE = os.environ.get('GATEOPT_LOGFILE', '/var/log/gateopt/gateopt.log')
LOG_LEVEL = 'INFO'
