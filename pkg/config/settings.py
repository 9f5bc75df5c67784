"""
Configuración global del sistema.
"""
import os
import sys

# Intentar cargar dotenv, pero no fallar si no existe
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

# Logging
ENABLE_LOGGING = os.environ.get('ENABLE_LOGGING', 'true').lower() == 'true'
LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')

# Aritmética en Q(e): grado máximo permitido de numerador/denominador
MAX_EPS_DEGREE = int(os.environ.get('MAX_EPS_DEGREE', '64'))

# Límites de tamaño (SizeGuard)
MAX_WALL_N = int(os.environ.get('MAX_WALL_N', '20'))
MAX_FLAT_N = int(os.environ.get('MAX_FLAT_N', '16'))
MAX_MIXED_M = int(os.environ.get('MAX_MIXED_M', '6'))

# Suites aleatorias
DEFAULT_SEED = int(os.environ.get('DEFAULT_SEED', '0'))
DEFAULT_TRUNCATION = int(os.environ.get('DEFAULT_TRUNCATION', '6'))
RANDOM_COEFF_BOUND = int(os.environ.get('RANDOM_COEFF_BOUND', '5'))
FIBER_SAMPLE_ROUNDS = int(os.environ.get('FIBER_SAMPLE_ROUNDS', '600'))

# Rutas de archivos
DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'data')
SAMPLE_ARRANGEMENT_FILE = os.path.join(DATA_DIR, 'arrangement_e26.json')
SAMPLE_FAMILY_FILE = os.path.join(DATA_DIR, 'family_d2.json')
SAMPLE_LIFTING_FILE = os.path.join(DATA_DIR, 'lifting_defect_m4.json')
SAMPLE_SURFACE_FILE = os.path.join(DATA_DIR, 'surface_p1xp1.json')
SAMPLE_WEIGHTS_FILE = os.path.join(DATA_DIR, 'weights_d1_n6.json')

# Códigos de salida del CLI
EXIT_OK = 0
EXIT_VERDICT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2

# Subcomandos disponibles
SUBCOMMANDS = (
    "walls",
    "segment",
    "chamber",
    "stability",
    "ample",
    "replace",
    "mixedsub",
    "verify-paper",
)


# Validación de configuración
def validate_config():
    """Valida que la configuración esté correcta"""
    errors = []

    if MAX_EPS_DEGREE < 2:
        errors.append("MAX_EPS_DEGREE debe ser al menos 2")

    if not 4 <= MAX_WALL_N <= 24:
        errors.append("MAX_WALL_N debe estar entre 4 y 24")

    if MAX_FLAT_N < 4:
        errors.append("MAX_FLAT_N debe ser al menos 4")

    if MAX_MIXED_M < 1:
        errors.append("MAX_MIXED_M debe ser mayor a 0")

    if DEFAULT_TRUNCATION < 2:
        errors.append("DEFAULT_TRUNCATION debe ser al menos 2")

    if FIBER_SAMPLE_ROUNDS < 1:
        errors.append("FIBER_SAMPLE_ROUNDS debe ser mayor a 0")

    if errors:
        print(f"⚠️  Advertencias de configuración: {', '.join(errors)}", file=sys.stderr)

    return not errors


# Validar al importar
validate_config()
