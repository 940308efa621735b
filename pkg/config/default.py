import os

DEBUG = False

# logging
LOGFILE = os.environ.get('GATEOPT_LOGFILE')
LOG_LEVEL = 'INFO'

# global parameters of generated instances
PARAM_V_M = 80.0
PARAM_V_TAXI = 300.0
PARAM_T_PB = 2.0
PARAM_T_BUFF = 15.0
PARAM_T_DLY = 1.0
PARAM_CONFLICT_A = 8.0
PARAM_CONFLICT_B = 0.9

# instance generator
GEN_N_FLIGHTS = 60
GEN_N_GATES = 12
GEN_N_BANKS = 3
GEN_DAY_START = 360.0
GEN_DAY_SPAN = 960.0
GEN_TURN_TIME = (45.0, 90.0)
GEN_TRANSFER_FRACTION = 0.3
GEN_SEATS = (100, 300)
GEN_CONCOURSE_LENGTH = 1200.0
GEN_CHECKPOINT_POSITION = 400.0
GEN_BAGCLAIM_POSITION = 800.0
GEN_SPOT_OFFSET = 100.0
GEN_MIN_CONNECT = 30.0
GEN_RNG_SEED = 0

# tabu search
TABU_MAX_ITER = 5000
TABU_STALL_LIMIT = 500
TABU_TENURE = 10
TABU_EXCHANGE_PERIOD = 50
TABU_EXCHANGE_CANDIDATES = 20
TABU_RESTARTS = 1
TABU_RNG_SEED = 0

# exhaustive oracle
ORACLE_LIMIT = 10 ** 7

# gate conflict calibration
CALIBRATION_GRID = tuple(range(0, 121, 5))
CALIBRATION_SAMPLES = 10 ** 5
CALIBRATION_MEASURE = 'conditional'
