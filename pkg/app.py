"""
Rooted Density Analysis Application
Command-line entry point for rooted subgraph censuses, blockmodel
goodness-of-fit tests and Monte Carlo validation runs

    python app.py census --graph data/counting_example.txt --motifs triangle,square
    python app.py gof --graph data/school_graph.txt --seed 1 --out reports/gof.json
    python app.py validate --preset vertex-qq --out reports/qq.json --plot reports/qq.html
"""
from src.cli import main


if __name__ == "__main__":
    main()
