/// One script command: keyword, accepted forms, the library operations it
/// reaches and a small script exercising it.
#[derive(Debug, Clone, Copy)]
pub struct CommandSpec {
    pub keyword: &'static str,
    pub usage: &'static str,
    pub ops: &'static [&'static str],
    pub example: &'static str,
}

// Shared declarations in front of each example.
macro_rules! prelude {
    (C, $b:literal) => {
        concat!("chart C { x:1, y:2 }\n", $b)
    };
    (V, $b:literal) => {
        concat!("chart C { x:1, y:2 }\nbundle V over C { s1:0, s2:-2 }\n", $b)
    };
    (U, $b:literal) => {
        concat!("chart U { u1:1, u2:1 }\ncl 2;\n", $b)
    };
    (K, $b:literal) => {
        concat!("cl 3;\n", $b)
    };
}

macro_rules! spec {
    ($kw:literal, $usage:literal, [$($op:literal),*], $prelude:ident, $body:literal) => {
        CommandSpec {
            keyword: $kw,
            usage: $usage,
            ops: &[$($op),*],
            example: prelude!($prelude, $body),
        }
    };
}

pub const COMMANDS: &[CommandSpec] = &[
    spec!(
        "deg",
        "deg CHART (f)",
        ["filtration_degree"],
        C,
        "deg C (x*y + x^3);"
    ),
    spec!(
        "part",
        "part CHART i (f)",
        ["homogeneous_part"],
        C,
        "part C 3 (x + x^3 + x*y);"
    ),
    spec!(
        "lead",
        "lead CHART (f)",
        ["leading_class"],
        C,
        "lead C (x^3 + x*y + y^2);"
    ),
    spec!(
        "grmul",
        "grmul CHART i (f) j (g)",
        ["gr_mul"],
        C,
        "grmul C 1 (x) 2 (y + x^3);"
    ),
    spec!(
        "rees",
        "rees CHART i (f)",
        ["rees_make"],
        C,
        "rees C 2 (x^2 + x^3);"
    ),
    spec!(
        "eval",
        "eval CHART i (f) t",
        ["rees_make", "rees_eval"],
        C,
        "eval C 2 (x^2 + x^3) 1/2;"
    ),
    spec!(
        "fiber0",
        "fiber0 CHART i (f)",
        ["rees_make", "rees_fiber0"],
        C,
        "fiber0 C 2 (x^2 + y);"
    ),
    spec!(
        "interp",
        "interp CHART i (f)",
        ["zoom_rescale"],
        C,
        "interp C 2 (x^2 + x^3);"
    ),
    spec!(
        "zoom",
        "zoom BUNDLE i (section) lambda | zoom CHART i (f) lambda",
        ["zoom_equivariance_check"],
        V,
        "zoom V -1 (s1 + x*s2) 2;"
    ),
    spec!(
        "morph",
        "morph SRC DST [phi, ...]",
        ["is_weighted_morphism"],
        C,
        "morph C C [x, y + x^2];"
    ),
    spec!(
        "pullback",
        "pullback SRC DST [phi, ...] (f) | pullback BUNDLE SRC [phi, ...]",
        ["pullback_function", "pullback"],
        V,
        "pullback V C [x, y + x^2];"
    ),
    spec!(
        "pathorder",
        "pathorder CHART (f) [gamma, ...]",
        ["path_order"],
        C,
        "pathorder C (y) [t, t^2];"
    ),
    spec!(
        "pathcheck",
        "pathcheck CHART [gamma, ...] | pathcheck (g1) (g2)",
        ["is_weighted_path", "pair_path_check"],
        C,
        "pathcheck C [t, t + t^2];"
    ),
    spec!("ranks", "ranks BUNDLE", ["fiber_filtration_ranks"], V, "ranks V;"),
    spec!("dual", "dual BUNDLE", ["dual"], V, "dual V;"),
    spec!("tensor", "tensor BUNDLE BUNDLE", ["tensor"], V, "tensor V V;"),
    spec!("hom", "hom BUNDLE BUNDLE", ["hom"], V, "hom V V;"),
    spec!("sym", "sym BUNDLE n", ["sym"], V, "sym V 2;"),
    spec!("wedge", "wedge BUNDLE n", ["wedge"], V, "wedge V 2;"),
    spec!("shift", "shift BUNDLE k", ["shift"], V, "shift V 1;"),
    spec!(
        "restrict",
        "restrict BUNDLE [coords] [fiber coords]",
        ["restrict_to_subbundle"],
        V,
        "restrict V [y] [y2];"
    ),
    spec!(
        "fibdeg",
        "fibdeg BUNDLE (F)",
        ["fiber_poly_degree"],
        V,
        "fibdeg V (y1 + x*y2^2);"
    ),
    spec!(
        "secdeg",
        "secdeg BUNDLE (section)",
        ["section_degree"],
        V,
        "secdeg V (s1 + x*s2);"
    ),
    spec!(
        "approx",
        "approx BUNDLE i (section)",
        ["homogeneous_approx"],
        V,
        "approx V -1 (s1 + x*s2);"
    ),
    spec!(
        "compose",
        "compose BUNDLE (F) (section)",
        ["compose"],
        V,
        "compose V (y1*y2) (s1 + x*s2);"
    ),
    spec!(
        "secinterp",
        "secinterp BUNDLE i (section)",
        ["interpolate_section"],
        V,
        "secinterp V -1 (s1 + x*s2);"
    ),
    spec!(
        "order",
        "order CHART|BUNDLE (D)",
        ["do_weighted_order"],
        C,
        "order C (d[x] + x*d[x]);"
    ),
    spec!(
        "linearize",
        "linearize CHART|BUNDLE q (D)",
        ["weighted_linearization"],
        C,
        "linearize C -1 (d[x] + x*d[x]);"
    ),
    spec!(
        "opinterp",
        "opinterp CHART|BUNDLE q (D)",
        ["interpolate_operator"],
        C,
        "opinterp C -1 (d[x] + x*d[x]);"
    ),
    spec!(
        "recover",
        "recover CHART i (f) | recover BUNDLE i (section)",
        ["recover_scalar_weighting", "recover_section_weighting"],
        V,
        "recover V 0 (s1 + x*s2);"
    ),
    spec!("clmul", "clmul (a) (b)", ["cl_mul"], K, "clmul (e1*e2) (e2*e3);"),
    spec!("cldeg", "cldeg (a)", ["cl_degree"], K, "cldeg (1 + e1*e2*e3);"),
    spec!(
        "grsym",
        "grsym [l] (a)",
        ["gr_symbol"],
        K,
        "grsym (e1*e2 + e1*e2*e3);"
    ),
    spec!(
        "getzler",
        "getzler CHART (D)",
        ["getzler_order"],
        U,
        "getzler U (e1*d[u1] + e2*d[u2]);"
    ),
    spec!(
        "symbol",
        "symbol CHART q (D)",
        ["getzler_symbol"],
        U,
        "symbol U -2 (e1*d[u1] + e2*d[u2]);"
    ),
    spec!(
        "rotor",
        "rotor c s i j",
        ["rotor_from_pythagorean"],
        K,
        "rotor 3/5 4/5 1 2;"
    ),
    spec!(
        "expjet",
        "expjet (xi)",
        ["exp_bivector_jet"],
        K,
        "expjet (e1*e2);"
    ),
    spec!(
        "cljet",
        "cljet (c)",
        ["is_weighted_cl_jet"],
        K,
        "cljet (t*e1 + t^2*e1*e2 + t^3*e1*e2*e3);"
    ),
    spec!(
        "severa",
        "severa (g) (xi) (xi1) (xi2) (c)",
        ["severa_action_check"],
        K,
        "severa (3/5 + 4/5*e1*e2) (e2*e3) (t^2*e1*e3) (0) (t*e1 + t^2*e2*e3);"
    ),
];

pub fn is_command(word: &str) -> bool {
    COMMANDS.iter().any(|c| c.keyword == word)
}

pub fn lookup(word: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.keyword == word)
}
