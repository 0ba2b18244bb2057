"""quiltsign: exact sign and index calculus for operators on quilted surfaces.

Subpackages cover determinant-line algebra (`detline`), combinatorial
quilted surfaces and surgeries (`surface`), Fredholm index formulas
(`index`), gluing and permutation signs (`orient`), integer Floer-type
chain complexes (`floer`), GF(2) relative cohomology and spin counts
(`cohom`), randomized self-checks (`verify`) and the command line front
end (`cli`).
"""

__version__ = "0.1.0"
