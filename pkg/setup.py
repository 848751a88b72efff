#!/usr/bin/env python3
"""
Multiple Line Atlas - Setup Script

Installs the numeric stack, writes a .env from env.example and checks that
the configured ground field can build a small curve.
"""

import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
MIN_PYTHON = (3, 9)

def check_python_version():
    """numpy 1.26 needs Python 3.9"""
    found = ".".join(str(part) for part in sys.version_info[:3])
    if sys.version_info < MIN_PYTHON:
        print(f"❌ Python {MIN_PYTHON[0]}.{MIN_PYTHON[1]}+ required, found {found}")
        return False
    print(f"✅ Python {found}")
    return True

def install_dependencies():
    """pip install the pinned requirements into the running interpreter"""
    requirements = ROOT / "requirements.txt"
    print(f"\n📦 Installing {requirements.name}...")
    result = subprocess.run([sys.executable, "-m", "pip", "install", "-q", "-r", str(requirements)])
    if result.returncode != 0:
        print(f"❌ pip exited with status {result.returncode}")
        return False
    print("✅ numpy, sympy, pydantic and test tools installed")
    return True

def create_env_file():
    """Copy env.example to .env unless one is present"""
    print("\n🔧 Writing .env...")
    env_file, template = ROOT / ".env", ROOT / "env.example"

    if env_file.exists():
        print("⚠️  Keeping existing .env")
        return True
    if not template.exists():
        print("❌ env.example is missing")
        return False
    shutil.copyfile(template, env_file)
    print("✅ .env created with FIELD_CHAR, seeds and window settings")
    return True

def create_directories():
    """Create the report directory"""
    print("\n📁 Preparing report directory...")

    try:
        from app.config import settings
        report_dir = ROOT / settings.REPORT_DIR
    except Exception:
        report_dir = ROOT / "reports"
    report_dir.mkdir(parents=True, exist_ok=True)
    print(f"✅ Reports go to {report_dir}")

def check_field():
    """Check the configured ground field"""
    print("\n🔢 Checking ground field...")

    try:
        from app.config import settings
        from app.field import get_field

        field = get_field(settings.FIELD_CHAR)
        print(f"✅ Working over {field}")
        return True
    except Exception as e:
        print(f"❌ Invalid FIELD_CHAR: {e}")
        return False

def run_smoke_test():
    """Build a triple line and compare its genus with the closed form"""
    print("\n🧪 Running smoke test...")

    try:
        from app.factory import good_triple_data, triple_from_data
        from app.invariants import qp_genus

        curve = triple_from_data(good_triple_data(0, 1))
        if curve.genus != qp_genus(curve.qp_type):
            print(f"❌ Genus {curve.genus} does not match {qp_genus(curve.qp_type)}")
            return False
        print(f"✅ Triple line of type {curve.qp_type} has genus {curve.genus}")
        return True

    except Exception as e:
        print(f"❌ Smoke test failed: {e}")
        return False

STEPS = [
    check_python_version,
    install_dependencies,
    create_env_file,
    create_directories,
    check_field,
    run_smoke_test,
]

def main():
    print("🚀 Multiple Line Atlas - Setup")
    print("=" * 50)

    for step in STEPS:
        # create_directories reports nothing; only an explicit False stops setup
        if step() is False:
            print(f"\n🛑 Setup stopped at {step.__name__}")
            sys.exit(1)

    print("\n🎉 Setup completed!")
    print("\n📋 Next Steps:")
    print("1. Run 'python run.py verify-paper' to re-check the classification")
    print("2. Run 'python run.py construct triple --a 1 --b 1 --out triple.json' to build a curve")
    print("3. Run 'python run.py invariants triple.json' to report its invariants")
    print("4. Run 'pytest' for the test suite")

if __name__ == "__main__":
    main()
