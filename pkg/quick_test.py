"""
Script de test rapide pour l'analyse des densités enracinées
Execute ce script pour tester rapidement toutes les fonctionnalités
"""
from src.analyzers import get_available_methods, create_analyzer
from src.counting.census import census
from src.counting.overlap import overlap_set, inductive_coefficients, verify_product_identity
from src.counting.rooted_counts import rooted_count
from src.exporters.excel_exporter import export_to_excel
from src.exporters.report_exporter import emit_report
from src.fixtures.sample_data import (COUNTING_EXAMPLE_COUNTS, counting_example_graph,
                                      school_dataset, three_block_kernel)
from src.models.kernel import SampleSpec, sample_graph
from src.utils.motif_utils import get_motif
from src.visualizers.qq_visualizer import StatisticVisualizer, write_figure


def print_separator(title=""):
    """Print a nice separator"""
    print(f"\n{'='*70}")
    if title:
        print(f"  {title}")
        print(f"{'='*70}")


def test_counting_example():
    """Test 1: Hand-checked rooted counts"""
    print_separator("TEST 1: Comptages Enracinés")

    graph = counting_example_graph()
    for vertex, expected in COUNTING_EXAMPLE_COUNTS.items():
        for name, value in expected.items():
            count = rooted_count(graph, vertex, get_motif(name))
            assert count == value, f"{name} au sommet {vertex}: {count} != {value}"
        print(f"✓ Sommet {vertex}: {expected}")

    return graph


def test_overlap(graph):
    """Test 2: Overlap coefficients and the product identity"""
    print_separator("TEST 2: Ensembles de Recouvrement")

    triangle = get_motif('triangle')
    for other in ('triangle', 'cherry', 'square'):
        f2 = get_motif(other)
        direct = overlap_set(triangle, f2)
        assert direct.coefficients() == inductive_coefficients(triangle, f2).coefficients()
        check = verify_product_identity(graph, 1, triangle, f2, direct)
        assert check['equal']
        print(f"✓ triangle x {other}: {len(direct)} graphes, "
              f"{check['lhs']} = {check['rhs']} au sommet 1")


def test_census():
    """Test 3: Densities on a sampled blockmodel graph"""
    print_separator("TEST 3: Recensement")

    spec = SampleSpec(n=300, rho=300 ** (-1 / 3), seed=1)
    graph, _ = sample_graph(three_block_kernel(), spec)
    densities = census(graph, [get_motif('edge'), get_motif('triangle')])
    print(f"✓ Graphe: {graph.n} sommets, {graph.edge_count} arêtes")
    for label, mean in densities.summary()['mean_density'].items():
        print(f"✓ {label}: densité moyenne {mean:.3f}")
    return graph


def test_pipelines(graph):
    """Test 4: Goodness-of-fit and regression"""
    print_separator("TEST 4: Méthodes d'Analyse")

    print("\nMéthodes disponibles:")
    for method in get_available_methods():
        print(f"   - {method['name']}: {method['description']}")

    results = {}

    print("\n1. Test d'adéquation...")
    result = create_analyzer('gof').run(graph=graph, motifs='edge,triangle', replicates=20,
                                        critical_replicates=40, seed=1)
    results['gof'] = result
    print(f"   ✓ Valeur critique: {result.payload['critical_value']:.3f}")
    print(f"   ✓ Sommets rejetés: {len(result.payload['rejected'])}")

    print("\n2. Régression logistique...")
    school, covariates = school_dataset(n=600, seed=1)
    result = create_analyzer('regress').run(graph=school, covariates=covariates,
                                            motifs='triangle', extra='')
    results['regress'] = result
    for term, beta in zip(result.payload['terms'], result.payload['beta']):
        print(f"   ✓ {term}: {beta:.3f}")

    return results


def test_exports(results):
    """Test 5: Reports, Excel and figures"""
    print_separator("TEST 5: Export")

    gof = results['gof']
    emit_report(gof, "test_rapport_gof.json")
    print("   ✓ Sauvegardé: test_rapport_gof.json")

    export_to_excel(gof, "test_rapport_gof.xlsx", include_charts=True)
    print("   ✓ Sauvegardé: test_rapport_gof.xlsx")

    artifact = gof.artifact
    fig = StatisticVisualizer().create_statistic_scatter(
        artifact.t_hat, artifact.critical_value, artifact.bonferroni_value)
    write_figure(fig, "test_statistiques.html")
    print("   ✓ Sauvegardé: test_statistiques.html")


def main():
    """Run all tests"""
    print("\n" + "="*70)
    print("  ANALYSE DES DENSITÉS ENRACINÉES - TEST COMPLET")
    print("="*70)

    try:
        example = test_counting_example()
        test_overlap(example)
        graph = test_census()
        results = test_pipelines(graph)
        test_exports(results)

        print_separator("RÉSUMÉ FINAL")
        print("\n✅ TOUS LES TESTS RÉUSSIS!")
        print("\nFichiers générés:")
        print("   📄 test_rapport_gof.json")
        print("   📄 test_rapport_gof.xlsx")
        print("   📊 test_statistiques.html")

        print("\nPour lancer une analyse:")
        print("   python app.py --help")

        print("\n" + "="*70 + "\n")

        return True

    except Exception as e:
        print(f"\n❌ ERREUR: {str(e)}")
        import traceback
        traceback.print_exc()
        return False


if __name__ == "__main__":
    success = main()
    exit(0 if success else 1)
