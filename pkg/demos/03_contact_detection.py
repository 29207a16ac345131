"""Contact detection from pipe-side measurements only.

Runs the grasp, soft-touch, and no-contact protocols, prints the observer
peaks and detection results, then shows the chattering failure mode:
tight pump hysteresis without gating produces false positives that the
default switch gate removes.
"""

from thermocover import builtin_scenarios, detect_contacts, simulate
from thermocover.scenario import apply_overrides


def run(spec):
    trace = simulate(spec)
    return trace, detect_contacts(trace, spec.detection)


def main():
    scenarios = builtin_scenarios()
    for name in ("exp2_grasp", "exp2_softtouch", "exp2_nocontact"):
        _, report = run(scenarios[name])
        peaks = ", ".join(f"{p:.2f} W" for p in report.peak_per_event)
        print(f"{name:16s} detections={len(report.intervals)} "
              f"tp={report.true_positives} fp={report.false_positives} "
              f"peaks=[{peaks}]")
    print("\nA grasp couples more skin area than a soft touch, so its")
    print("heat-flow peak is at least twice as large; neither is confused")
    print("with the no-contact run.\n")

    tight = apply_overrides(scenarios["exp2_nocontact"],
                            ["detection.switch_gate=0",
                             "pump.on_band=0.05", "pump.off_band=0.02"])
    _, report = run(tight)
    print(f"tight hysteresis, no gating: false positives = "
          f"{report.false_positives}")
    print("Pump switching transients masquerade as contacts when the")
    print("detector is not gated around known pump toggles; the default")
    print("switch gate suppresses exactly these.")


if __name__ == "__main__":
    main()
