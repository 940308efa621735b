import os

DEBUG = False
TESTING = True
LOGFILE = os.environ.get('GATEOPT_TEST_LOGFILE')
LOG_LEVEL = 'WARNING'

TABU_MAX_ITER = 1000
TABU_STALL_LIMIT = 200
CALIBRATION_SAMPLES = 10 ** 4
