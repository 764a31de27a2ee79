"""Generate an instance, design it, verify it, and show the refusal path.

Everything is seeded, so this script prints the same bytes on every run.
The tampered design at the end drops one link from the chosen topology;
the verifier refuses it at the structural gate instead of burning trials.
"""

from obsnet import (
    DesignResult,
    InfeasibleError,
    StructuredMatrix,
    design_instance,
    generate_instance,
    serialize_design,
    verify_design_numeric,
)


def main() -> None:
    instance = generate_instance(n=8, m=3, density=0.3, seed=42)
    print(f"instance: n={instance.n} states, m={instance.m} sensors,")
    print(f"  {len(instance.system_pattern.nonzeros)} system nonzeros,"
          f" {len(instance.network.arcs)} candidate links")

    design = design_instance(instance)
    print("design document:")
    print(serialize_design(design), end="")

    report = verify_design_numeric(instance, design, trials=10, seed=7)
    print(f"verification: {report.passes}/{report.trials} trials passed"
          f" at tolerance {report.tolerance}")

    # drop one selected link; strong connectivity dies and the gate refuses
    kept = sorted(design.network_pattern.nonzeros)[:-1]
    tampered = DesignResult(
        measurement_pattern=design.measurement_pattern,
        network_pattern=StructuredMatrix(instance.m, instance.m, frozenset(kept)),
        sensing_cost=design.sensing_cost,
        networking_cost=0.0,
        network_optimality="exact",
    )
    try:
        verify_design_numeric(instance, tampered, trials=10, seed=7)
    except InfeasibleError as exc:
        print("tampered design:", exc)


if __name__ == "__main__":
    main()
