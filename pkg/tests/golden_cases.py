"""CLI invocations whose output is frozen under tests/golden/.

Paths are relative to tests/data. Regenerate with
``python3 tests/golden_cases.py`` after an intentional format change.
"""

CASES = {
    "solve_csp_k3": (["solve-csp", "triangle.txt", "--template", "k3"], 0),
    "solve_csp_named": (["solve-csp", "triangle.txt", "--template", "k3_named.txt"], 0),
    "solve_csp_k2": (["solve-csp", "triangle.txt", "--template", "k2"], 1),
    "pcsp_z": (["solve-pcsp13nae", "small_triples.txt"], 0),
    "pcsp_q": (["solve-pcsp13nae", "small_triples.txt", "--method", "q"], 0),
    "pcsp_xxx": (["solve-pcsp13nae", "xxx.txt"], 1),
    "gen_planted": (["gen", "planted", "--n", "6", "--m", "4", "--seed", "1"], 0),
    "poly_find_nae_cyclic": (["poly", "find", "--template", "nae", "--arity", "3", "--cyclic"], 1),
    "poly_find_pair": (["poly", "find", "--template", "one-in-three", "--target", "nae",
                        "--arity", "2"], 0),
    "poly_check_or": (["poly", "check", "--template", "one-in-three", "--target", "nae",
                       "--table", "or.txt"], 0),
    "poly_survey": (["poly", "survey", "--template", "one-in-three"], 1),
    "poly_siggers": (["poly", "pseudo-siggers", "--template", "one-in-three"], 1),
    "pp_eval": (["pp", "eval", "project.pp", "--template", "one-in-three"], 0),
    "pp_power": (["pp", "power", "project_spec.txt", "--template", "one-in-three",
                  "--target", "nae"], 0),
    "pp_relax": (["pp", "relax", "one-in-three", "nae", "nae", "nae"], 0),
    "pp_relax_none": (["pp", "relax", "nae", "nae", "one-in-three", "one-in-three"], 1),
    "pp_gadget": (["pp", "gadget", "s_instance.txt", "project_spec.txt"], 0),
    "lab_t": (["prooflab", "t", "--matrix", "tau4_p3.txt"], 0),
    "lab_area": (["prooflab", "area", "--matrix", "tau4_p3.txt"], 0),
    "lab_cover": (["prooflab", "cover", "ones3.txt", "zeros3.txt", "zeros3.txt"], 0),
    "lab_not_cover": (["prooflab", "cover", "zeros3.txt", "zeros3.txt", "zeros3.txt"], 1),
    "lab_tame": (["prooflab", "tame", "--matrix", "tau1_p3.txt"], 1),
    "lab_refute_parity": (["prooflab", "refute", "--p", "127", "--c-size", "2"], 0),
    "lab_refute_threshold": (["prooflab", "refute", "--p", "127", "--c-size", "2",
                              "--op", "threshold"], 0),
}

if __name__ == "__main__":
    import os
    from pathlib import Path

    from pcspwb.cli import run

    here = Path(__file__).parent
    os.chdir(here / "data")
    (here / "golden").mkdir(exist_ok=True)
    for name, (argv, _) in CASES.items():
        code, text = run(argv)
        (here / "golden" / f"{name}.out").write_text(text)
        print(name, code)
