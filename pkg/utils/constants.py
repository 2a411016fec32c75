EXIT_SUCCESS = 0
EXIT_UNEXPECTED_ERROR = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERIC_ERROR = 3
EXIT_IO_ERROR = 4

DEFAULT_CONFIG_FILE = "config/experiment.cfg"
