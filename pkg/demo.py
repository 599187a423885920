"""
Walkthrough of the classifier on the catalog functions
"""
import numpy as np

from src.models import catalog
from src.models.distribution import JointDistribution
from src.models.partitions import TerminalPartition
from src.classify.certification import classify_iid, replay_certificate
from src.classify.necessary import hk_check, necessary_condition, sufficient_prop5, sufficient_prop6
from src.classify.pseudo_identity import classify_smooth, replay_witness
from src.cli.reports import build_function_report, render_matrix
from src.oracle.reconstruction import reconstruct_from_class_and_type
from src.oracle.sampling import ci_falsifier
from src.rates.entropy import region_contains, sw_region, sw_vertices
from src.rates.independence import ci_factorization_deviation, mixture_ci_check
from src.structure.conditions import check_ci_condition, finest_semi_informative_tuple


def banner(title):
    print("\n" + "=" * 60)
    print(title)
    print("=" * 60)


def demo_two_terminal_conditions():
    """Han-Kobayashi conditions and the necessary condition on two terminals"""
    banner("DEMO 1: Two-terminal conditions")
    for f in (catalog.table1(), catalog.table2(), catalog.mod2sum()):
        hk = hk_check(f)
        necessary = necessary_condition(f)
        status = "holds" if hk.holds else f"fails condition {hk.failed_condition} at {hk.witness}"
        print(f"{f.name}: HK {status}; necessary condition {'holds' if necessary.holds else 'fails'}")
        if necessary.witness is not None:
            w = necessary.witness
            print(f"  witness on {w.subset}: {w.first} vs {w.second}")


def demo_smooth_sources():
    """Pseudo identities decide the smooth-source class"""
    banner("DEMO 2: Smooth sources")
    for num_terminals in (2, 3, 4):
        f = catalog.example8_family(num_terminals)
        verdict = classify_smooth(f)
        print(f"{f.name}: {verdict.answer.value}, trace {list(verdict.trace)}")

    f = catalog.table1()
    verdict = classify_smooth(f)
    w = verdict.witness
    print(f"{f.name}: {verdict.answer.value}, case ({w.case}) witness on {w.subset}, m={w.block_length}")
    print(f"  witness replays: {replay_witness(f, w)}")


def demo_iid_certificates():
    """Recursion certificates for i.i.d. sources with positivity"""
    banner("DEMO 3: Certificates for i.i.d. sources")
    for f in (catalog.table4(), catalog.example8_family(3), catalog.mod2sum()):
        verdict = classify_iid(f)
        print(f"{f.name}: {verdict.answer.value}")
        if verdict.certificate is not None:
            replay_certificate(f, verdict.certificate)
            for i, step in enumerate(verdict.certificate.steps, start=1):
                print(f"  {i}. {step.describe()}")
        print(f"  Prop5={sufficient_prop5(f)} Prop6={sufficient_prop6(f)}")

    f = catalog.table2()
    print(f"\nfinest semi-informative partitions of {f.name} on {{1}}: "
          f"{finest_semi_informative_tuple(f, [1]).describe()}")
    print("reconstruction from classes [0] [1,2] and type {0:1, 1:1, 2:1}: "
          f"{reconstruct_from_class_and_type([(0,), (1, 2)], [1, 0, 1], {0: 1, 1: 1, 2: 1})}")


def demo_rate_regions():
    """Slepian-Wolf constraints and the factorization behind conditional independence"""
    banner("DEMO 4: Rate regions")
    dsbs = JointDistribution.from_array([[0.375, 0.125], [0.125, 0.375]], name="dsbs_025")
    region = sw_region(dsbs)
    for name, value in region.by_name().items():
        print(f"  h({name}) = {value:.6f}")
    print(f"  vertices: {[tuple(round(r, 6) for r in v) for v in sw_vertices(region)]}")
    print(f"  (0.82, 1.0) inside: {region_contains(region, [0.82, 1.0])}")

    part = TerminalPartition.parse("{1}/{2}", 2)
    for f in (catalog.table1(), catalog.mod2sum()):
        ci = check_ci_condition(f, part)
        P = ci_falsifier(f, part, trials=50, seed=0)
        print(f"{f.name}: CI condition {'holds' if ci.holds else 'fails'}, "
              f"falsifier {'found a distribution' if P is not None else 'found nothing'}")
        if P is not None:
            print(f"  deviation {ci_factorization_deviation(P, f, part):.4f}")

    weights = np.ones(9)
    weights[-1] = 4
    skewed = JointDistribution.from_array(weights.reshape(3, 3))
    mixture = mixture_ci_check(JointDistribution.uniform([3, 3]), skewed, catalog.table1())
    print(f"table1 mixture: value distributions differ by {mixture.distance:.4f}, induced={mixture.induced}")


def demo_report():
    """The condition matrix over the catalog"""
    banner("DEMO 5: Condition matrix")
    functions = [catalog.table1(), catalog.table2(), catalog.table4(), catalog.mod2sum(), catalog.example8_family(3)]
    print(render_matrix([build_function_report(f)["report"] for f in functions]))


def main():
    """Main demo function"""
    banner("SLEPIAN-WOLF CLASS - DEMONSTRATION")
    demo_two_terminal_conditions()
    demo_smooth_sources()
    demo_iid_certificates()
    demo_rate_regions()
    demo_report()

    banner("DEMO COMPLETE!")
    print("\nFor the command line, run:")
    print("  python -m src.cli report data/corpus")
    print("  python -m src.cli classify --class smooth data/corpus/example8_L3.json")


if __name__ == "__main__":
    main()
