import sys
from pathlib import Path

# make the shared oracle module importable regardless of pytest rootdir
sys.path.insert(0, str(Path(__file__).resolve().parent))
