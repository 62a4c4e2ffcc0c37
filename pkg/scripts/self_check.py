"""
Standalone self-check of the character engines
Can be run independently without starting the FastAPI server
"""
import sys
from pathlib import Path

# Add parent directory to path to import app modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.core.startup import self_check


if __name__ == "__main__":
    print("🔄 Running standalone self-check...")
    report = self_check()
    print("✅ Done!" if report["ok"] else "❌ Self-check failed")
    sys.exit(0 if report["ok"] else 1)
