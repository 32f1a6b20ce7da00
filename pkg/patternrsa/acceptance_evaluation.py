"""
Acceptance evaluation
Runs every acceptance criterion end to end, times it and records the
measured values next to the verdict.
"""

import itertools
import json
import math
import time
from datetime import datetime
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from bitnum import BitString, extract_bits, value_to_bitstring
from charsum import (
    CharacterIndex,
    all_short_sums,
    decay_scan,
    orthogonality_check,
    orthogonality_direct,
    short_sum_direct,
)
from generator import round_stats, rsa_modulus, sparse_stats
from oracle import CountingMode, count_report, delta_via_characters, pair_product_histogram, pattern_totals
from primes import enumerate_primes, is_prime, make_rng, random_below, random_bits


class AcceptanceEvaluator:
    def __init__(self, seed: int = 20240601, quick: bool = False):
        """
        Initialize the evaluator

        Args:
            seed: Parent seed for every random choice in the run
            quick: Shrink batch sizes (for smoke runs); verdicts then cover fewer cases
        """
        self.seed = seed
        self.quick = quick
        self.evaluation_results: List[Dict[str, Any]] = []

        self.criteria: Dict[str, Callable[[], Dict[str, Any]]] = {
            "pattern_correctness": self._pattern_correctness,
            "exact_oracle_identities": self._exact_oracle_identities,
            "hand_checkable_count": self._hand_checkable_count,
            "character_reconstruction": self._character_reconstruction,
            "orthogonality": self._orthogonality,
            "dft_equivalence": self._dft_equivalence,
            "round_count_empirics": self._round_count_empirics,
            "sparse_popcount": self._sparse_popcount,
            "short_sum_decay": self._short_sum_decay,
        }

    def run_evaluation(self, only: Optional[List[str]] = None) -> Dict[str, Any]:
        """
        Run the selected criteria (all by default)

        Args:
            only: Criterion names to run, in the order given

        Returns:
            Dictionary with metrics and detailed results
        """
        print("🔬 Starting acceptance evaluation...")
        print("=" * 60)

        unknown = [name for name in (only or []) if name not in self.criteria]
        if unknown:
            raise ValueError(f"unknown criteria: {', '.join(unknown)}")
        selected = list(self.criteria) if only is None else list(only)
        evaluation_start = time.time()

        for index, name in enumerate(selected, start=1):
            print(f"\n[{index}/{len(selected)}] {name.replace('_', ' ').title()}")
            start = time.time()
            try:
                details = self.criteria[name]()
                passed = bool(details.pop("passed"))
                result = {"criterion": name, "passed": passed, "details": details}
            except Exception as e:
                result = {"criterion": name, "passed": False, "error": f"{type(e).__name__}: {e}"}
            result["elapsed_seconds"] = round(time.time() - start, 3)
            self.evaluation_results.append(result)

            status = "✅" if result["passed"] else "❌"
            print(f"   {status} Passed: {result['passed']}")
            print(f"   ⏱️  Time: {result['elapsed_seconds']:.2f}s")
            if "error" in result:
                print(f"   ❌ Error: {result['error']}")

        passed = sum(1 for r in self.evaluation_results if r["passed"])
        metrics = {
            "total_criteria": len(selected),
            "passed_criteria": passed,
            "pass_rate": (passed / len(selected)) * 100 if selected else 0.0,
            "total_evaluation_time": time.time() - evaluation_start,
            "timestamp": datetime.now().isoformat(),
        }

        print(f"\n{'=' * 60}")
        print("🎯 EVALUATION COMPLETE")
        print(f"{'=' * 60}")
        print(f"Passed: {passed}/{len(selected)} ({metrics['pass_rate']:.1f}%)")
        print(f"Total Time: {metrics['total_evaluation_time']:.2f}s")

        return {"metrics": metrics, "detailed_results": self.evaluation_results}

    # ------------------------------------------------------------------
    # Criteria
    # ------------------------------------------------------------------

    def _pattern_correctness(self) -> Dict[str, Any]:
        rng = make_rng(self.seed)
        patterns = 5 if self.quick else 20
        start = time.time()
        failures = []
        runs = 0
        for n in (16, 24, 32, 48, 64):
            m = math.ceil(n / 4)
            for trial in range(patterns):
                sigma = value_to_bitstring(random_bits(rng, m), m)
                record = rsa_modulus(n, m, sigma, seed=self.seed, rng=rng)
                runs += 1
                low, high = 1 << (n - 1), 1 << n
                ok = (
                    record.p != record.l
                    and low < record.p < high and low < record.l < high
                    and is_prime(record.p) and is_prime(record.l)
                    and extract_bits(record.M, n - 1, n - m) == sigma
                )
                if not ok:
                    failures.append({"n": n, "trial": trial, "sigma": str(sigma)})
        elapsed = time.time() - start
        return {"passed": not failures and elapsed < 60, "runs": runs, "failures": failures,
                "runtime_seconds": elapsed}

    def _exact_oracle_identities(self) -> Dict[str, Any]:
        checked = 0
        mismatches = []
        for n in range(2, 13):
            square = len(enumerate_primes(n)) ** 2
            histogram = pair_product_histogram(n, CountingMode.ORDERED)
            if np.any(histogram[0::2] != 0):
                mismatches.append({"n": n, "issue": "even residue reached"})
            for m in range(0, min(3, n) + 1):
                checked += 1
                if int(pattern_totals(n, m).sum()) != square:
                    mismatches.append({"n": n, "m": m, "issue": "partition total"})
        return {"passed": not mismatches, "cases": checked, "mismatches": mismatches}

    def _hand_checkable_count(self) -> Dict[str, Any]:
        sigma = BitString.parse("1")
        report = count_report(5, 1, sigma, CountingMode.ORDERED)
        primes = enumerate_primes(5).to_list()
        # independent recount: every ordered pair, top bit of the low 5 bits
        independent = sum(1 for p, l in itertools.product(primes, primes) if (p * l) % 32 >= 16)
        expected_delta = Fraction(independent) - Fraction(len(primes) ** 2, 2)
        passed = (
            report.total == 5 == independent
            and report.delta == Fraction(-15, 2) == expected_delta
        )
        return {"passed": passed, "total": report.total, "delta": str(report.delta),
                "independent_total": independent}

    def _character_reconstruction(self) -> Dict[str, Any]:
        rng = make_rng(self.seed + 1)
        rows = []
        start = time.time()
        for n, m in ((10, 2), (12, 3), (14, 2)):
            sigma = value_to_bitstring(random_bits(rng, m), m)
            exact = count_report(n, m, sigma, include_counts=False).delta
            rebuilt = delta_via_characters(n, m, sigma)
            error = abs(rebuilt - float(exact))
            rows.append({
                "n": n, "m": m, "sigma": str(sigma), "exact": str(exact),
                "rebuilt": [rebuilt.real, rebuilt.imag], "error": error,
                "ok": error <= 1e-6 * max(1.0, abs(float(exact))),
            })
        elapsed = time.time() - start
        return {"passed": all(r["ok"] for r in rows) and elapsed < 30, "cases": rows,
                "runtime_seconds": elapsed}

    def _orthogonality(self) -> Dict[str, Any]:
        worst = 0.0
        closed_form_ok = True
        for n in range(3, 11):
            full = 1 << (n - 1)
            for u in range(1, 1 << n, 2):
                expected = full if u == 1 else 0
                worst = max(worst, abs(orthogonality_direct(u, n) - expected))
                closed_form_ok &= orthogonality_check(u, n) == expected
        return {"passed": closed_form_ok and worst <= 1e-6, "max_abs_error": worst,
                "closed_form_exact": closed_form_ok}

    def _dft_equivalence(self) -> Dict[str, Any]:
        rng = make_rng(self.seed + 2)
        intervals = 10 if self.quick else 50
        worst_scaled = 0.0
        worst_parseval = 0.0
        for n, sampled in ((10, None), (14, 32)):
            modulus = 1 << n
            half = 1 << (n - 2)
            for _ in range(intervals):
                t0 = random_below(rng, modulus)
                L = 1 + random_below(rng, modulus)
                table = all_short_sums(t0, L, n)
                if sampled is None:
                    indices = [CharacterIndex(a, b) for a in (0, 1) for b in range(half)]
                else:
                    indices = [CharacterIndex(random_below(rng, 2), random_below(rng, half)) for _ in range(sampled)]
                for chi in indices:
                    error = abs(table[chi] - short_sum_direct(chi, t0, L, n))
                    worst_scaled = max(worst_scaled, error / L)
                odd = table.odd_count
                expected = (1 << (n - 1)) * odd
                worst_parseval = max(worst_parseval, abs(table.energy() - expected) / max(1, expected))
        return {"passed": worst_scaled <= 1e-9 and worst_parseval <= 1e-6,
                "max_error_over_L": worst_scaled, "max_parseval_relative": worst_parseval}

    def _round_count_empirics(self) -> Dict[str, Any]:
        n, m = 32, 8
        sigma = value_to_bitstring(random_bits(make_rng(self.seed + 3), m), m)
        stats = round_stats(n, m, sigma, trials=50 if self.quick else 200, seed=self.seed)
        passed = (
            stats.success_rate == 1.0
            and stats.mean_rounds is not None
            and 0.2 * n <= stats.mean_rounds <= 3 * n
        )
        return {"passed": passed, "success_rate": stats.success_rate, "mean_rounds": stats.mean_rounds,
                "median_rounds": stats.median_rounds, "heuristic_mean": stats.heuristic_mean}

    def _sparse_popcount(self) -> Dict[str, Any]:
        n, m = 64, 16
        report = sparse_stats(n, m, runs=25 if self.quick else 100, seed=self.seed)
        passed = (
            report.successes == report.runs
            and report.all_patterns_zero
            and report.max_popcount is not None
            and report.max_popcount <= 2 * n - m
        )
        return {"passed": passed, "max_popcount": report.max_popcount, "mean_popcount": report.mean_popcount,
                "distribution": {str(k): v for k, v in sorted(report.distribution.items())}}

    def _short_sum_decay(self) -> Dict[str, Any]:
        rows = decay_scan(range(12, 21), length_shift=2)
        ratios = [row.ratio for row in rows]
        return {"passed": ratios[0] > ratios[-1], "ratios": {str(row.n): row.ratio for row in rows}}

    def save_results(self, filename: Optional[str] = None) -> str:
        """Save evaluation results to a JSON file"""
        if not filename:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            filename = f"acceptance_evaluation_{timestamp}.json"

        results = {
            "evaluation_metadata": {
                "timestamp": datetime.now().isoformat(),
                "seed": self.seed,
                "quick": self.quick,
                "total_criteria": len(self.evaluation_results),
            },
            "detailed_results": self.evaluation_results,
        }

        with open(filename, "w", encoding="utf-8") as f:
            json.dump(results, f, indent=2, default=str)

        print(f"💾 Results saved to: {filename}")
        return filename

