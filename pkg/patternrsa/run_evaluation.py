#!/usr/bin/env python3
"""
Quick acceptance evaluation runner
Puts this directory on the import path, runs every criterion and saves the results
"""

import argparse
import sys
from pathlib import Path


def setup_environment():
    """Make the flat modules next to this file importable"""
    print("🔧 Setting up environment...")
    current_dir = Path(__file__).parent
    if str(current_dir) not in sys.path:
        sys.path.insert(0, str(current_dir))
    print("✅ Environment configured")


def run_evaluation(seed: int, quick: bool, only=None, output=None):
    """Run the acceptance evaluation and save it"""
    try:
        from acceptance_evaluation import AcceptanceEvaluator

        print("🚀 Starting acceptance evaluation...")
        evaluator = AcceptanceEvaluator(seed=seed, quick=quick)
        results = evaluator.run_evaluation(only=only)
        filename = evaluator.save_results(output)

        print("\n🎯 Evaluation Complete!")
        print(f"📊 Results saved to: {filename}")
        return results

    except Exception as e:
        print(f"❌ Evaluation failed: {e}")
        import traceback
        traceback.print_exc()
        return None


def main():
    """Main function"""
    parser = argparse.ArgumentParser(description="Run the acceptance criteria")
    parser.add_argument("--seed", type=int, default=20240601)
    parser.add_argument("--quick", action="store_true", help="Smaller batches for a smoke run")
    parser.add_argument("--only", nargs="*", default=None, help="Criterion names to run")
    parser.add_argument("--output", type=str, default=None, help="Result file (default: timestamped)")
    args = parser.parse_args()

    print("=" * 60)
    print("🔬 Acceptance Evaluation")
    print("=" * 60)

    setup_environment()
    results = run_evaluation(args.seed, args.quick, args.only, args.output)

    if results and results["metrics"]["passed_criteria"] == results["metrics"]["total_criteria"]:
        print("\n✅ All criteria passed!")
    else:
        print("\n❌ Some criteria failed")
        sys.exit(1)


if __name__ == "__main__":
    main()
