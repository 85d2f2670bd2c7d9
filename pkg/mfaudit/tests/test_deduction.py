"""Tests for the knowledge-closure engine."""

import os
import warnings
from unittest import TestCase

import numpy as np

from mfaudit.deduction import (
    ClosureLimits,
    KnowledgeBase,
    brute_force_close,
    close,
    derivable,
    load_kb,
    parse_kb,
    replay,
)
from mfaudit.errors import ClosureLimitExceeded, FixtureParseError, ReplayMismatch
from mfaudit.primitives import DEFAULT_SUITE, ModGroup
from mfaudit.terms import (
    Atom,
    ConcatSeq,
    HashApp,
    SymEnc,
    XorSum,
    evaluate,
    normalize,
    parse_term,
)

KB_PATH = os.path.join(
    os.path.dirname(os.path.dirname(__file__)), "data", "knowledge", "p2_attack.kb"
)
ELEMENT = DEFAULT_SUITE.element_length


def declare(*names, length=32, kind="secret"):
    return {name: Atom(name, kind, length) for name in names}


def build_kb(facts, equations, symbols):
    return KnowledgeBase(
        [parse_term(f, symbols) for f in facts],
        {name: parse_term(rhs, symbols) for name, rhs in equations.items()},
    )


def concrete_values(kb, env):
    """Values of the facts of kb, computed through the equations."""
    return {fact: evaluate(kb.unfold(fact), env) for fact in kb.facts}


def random_env(rng, symbols):
    grp = ModGroup(DEFAULT_SUITE.modulus)
    env = {}
    for name, atom in symbols.items():
        if atom.length == ELEMENT:
            env[name] = grp.encode(grp.random_element(rng))
        else:
            env[name] = rng.bytes(atom.length)
    return env


def p3_kb(equation_r2="mk (+) r2"):
    symbols = declare("mk", "r1", "r2", "TID_c", "spk_s", "R1", "R2", "SK_s")
    symbols.update(declare("X", "Y", length=ELEMENT))
    kb = build_kb(
        ["R1", "R2", "Y", "TID_c", "spk_s", "mk"],
        {
            "R1": "mk (+) r1",
            "R2": equation_r2,
            "Y": "X .+ SOH(H(r1, r2))",
            "SK_s": "H(mk, r1, r2, X, TID_c, spk_s)",
        },
        symbols,
    )
    return kb, symbols


SMALL = [Atom(name, "secret", 32) for name in "abcde"]


def random_fact(rng):
    def pick():
        return SMALL[rng.integers(len(SMALL))]

    choice = rng.integers(6)
    if choice == 0:
        return pick()
    if choice == 1:
        return XorSum((pick(), pick()))
    if choice == 2:
        return XorSum((pick(), pick(), pick()))
    if choice == 3:
        return HashApp((pick(),) if rng.random() < 0.5 else (pick(), pick()))
    if choice == 4:
        return SymEnc(pick(), XorSum((pick(), pick())))
    return ConcatSeq((HashApp((pick(),)), pick()))


def atoms_in(closure):
    return {t for t in closure.terms if isinstance(t, Atom)}


def random_kb(rng):
    facts = [random_fact(rng) for _ in range(int(rng.integers(1, 6)))]
    goal = random_fact(rng) if rng.random() < 0.5 else None
    return KnowledgeBase(facts), goal


class ProtocolDerivationTest(TestCase):
    def test_protocol2_session_key(self):
        symbols = declare("M_2", "GID_i", "ID_i", "V_1", "SK")
        kb = build_kb(
            ["M_2", "GID_i", "ID_i"],
            {"GID_i": "ID_i (+) V_1", "SK": "M_2 (+) V_1"},
            symbols,
        )
        closure = close(kb)
        self.assertIn(kb.unfold(Atom("SK")), closure)
        trace = derivable(kb, Atom("SK"))
        self.assertEqual(len(trace), 3)
        self.assertEqual(trace.rules(), ["equation-unfold", "xor-combine", "xor-combine"])

    def test_hash_is_one_way(self):
        kb = KnowledgeBase([parse_term("H(x)")])
        self.assertNotIn(Atom("x"), close(kb))
        self.assertIsNone(derivable(kb, Atom("x")))

    def test_protocol3_session_key(self):
        kb, symbols = p3_kb()
        trace = derivable(kb, Atom("SK_s"))
        self.assertIsNotNone(trace)
        self.assertIn("group-solve", trace.rules())
        self.assertEqual(trace.output, kb.unfold(Atom("SK_s")))

    def test_protocol3_literal_reading_blocks_attack(self):
        # Read literally, R2 repeats R1 and r2 stays hidden.
        kb, _ = p3_kb(equation_r2="mk (+) r1")
        self.assertIsNone(derivable(kb, Atom("SK_s")))

    def test_protocol5_session_key(self):
        symbols = declare("MID", "Id_SN", "x_s", "w_i", "S_key")
        kb = build_kb(
            ["MID", "Id_SN", "x_s"],
            {"w_i": "H(MID, x_s)", "S_key": "H(w_i, MID, Id_SN)"},
            symbols,
        )
        trace = derivable(kb, Atom("S_key"))
        self.assertEqual(trace.rules(), ["hash-apply", "hash-apply"])
        self.assertEqual(trace.output, kb.unfold(Atom("S_key")))

    def test_protocol6_session_key(self):
        symbols = declare(
            "SID_j", "T_3", "R_rand2'", "T_1'", "PID_i", "ID_i", "R_rand2", "T_1",
            "HID_i'", "Y_RC", "SK_ij",
        )
        kb = build_kb(
            ["SID_j", "T_3", "R_rand2'", "T_1'", "PID_i", "ID_i"],
            {
                "HID_i'": "H(PID_i)",
                "R_rand2'": "R_rand2 (+) ID_i",
                "T_1'": "T_1 (+) HID_i'",
                "Y_RC": "H(SID_j, HID_i', R_rand2, T_1)",
                "SK_ij": "H(Y_RC, SID_j, T_3)",
            },
            symbols,
        )
        trace = derivable(kb, Atom("SK_ij"))
        self.assertIsNotNone(trace)
        self.assertEqual(trace.rules()[-1], "hash-apply")

    def test_goal_already_known(self):
        kb = KnowledgeBase([Atom("a"), Atom("b")])
        trace = derivable(kb, Atom("a"))
        self.assertEqual(len(trace), 1)
        self.assertEqual(trace.rules(), ["known"])

    def test_concat_split(self):
        symbols = declare("K_sh", "U_rg", "ID_ur")
        symbols["ID_ur"] = Atom("ID_ur", "secret", 16)
        kb = build_kb(["CAT(H(K_sh (+) U_rg), ID_ur)"], {}, symbols)
        trace = derivable(kb, symbols["ID_ur"])
        self.assertEqual(trace.rules(), ["concat-split"])

    def test_decrypt_with_key(self):
        symbols = declare("K_X", "H_U", "R_U")
        kb = build_kb(["ENC(K_X, CAT(H_U, R_U))", "K_X"], {}, symbols)
        self.assertIn(Atom("R_U"), close(kb))
        self.assertNotIn(Atom("R_U"), close(build_kb(["ENC(K_X, CAT(H_U, R_U))"], {}, symbols)))


class ReplayTest(TestCase):
    def test_protocol2_replay(self):
        kb, goal = load_kb(KB_PATH)
        rng = np.random.default_rng(0)
        env = {name: rng.bytes(32) for name in ("ID_i", "V_1", "M_2")}
        trace = derivable(kb, goal)
        recovered = replay(trace, concrete_values(kb, env))
        self.assertEqual(recovered, evaluate(kb.unfold(goal), env))

    def test_protocol3_replay(self):
        kb, symbols = p3_kb()
        trace = derivable(kb, Atom("SK_s"))
        rng = np.random.default_rng(1)
        for _ in range(20):
            env = random_env(rng, symbols)
            expected = evaluate(kb.unfold(Atom("SK_s")), env)
            self.assertEqual(replay(trace, concrete_values(kb, env)), expected)

    def test_missing_value(self):
        kb, goal = load_kb(KB_PATH)
        trace = derivable(kb, goal)
        with self.assertRaises(ReplayMismatch):
            replay(trace, {Atom("M_2"): bytes(32)})


class ClosurePropertiesTest(TestCase):
    def setUp(self):
        warnings.simplefilter("ignore")

    def tearDown(self):
        warnings.resetwarnings()

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            kb, goal = random_kb(rng)
            depth = int(rng.integers(1, 4))
            limited = kb.with_limits(ClosureLimits(max_depth=depth))
            self.assertEqual(
                close(limited, goal=goal).terms, brute_force_close(kb, depth, goal=goal)
            )

    def test_protocol2_oracle(self):
        kb, goal = load_kb(KB_PATH)
        brute = brute_force_close(kb, 4, goal=goal)
        self.assertIn(kb.unfold(goal), brute)
        self.assertIsNotNone(derivable(kb, goal))

    def test_monotone(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            kb, goal = random_kb(rng)
            bigger = kb.extend([random_fact(rng) for _ in range(2)])
            self.assertTrue(close(kb, goal=goal).terms <= close(bigger, goal=goal).terms)

    def test_hash_facts_reveal_no_atoms(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            facts = [random_fact(rng) for _ in range(4)]
            facts = [f for f in facts if not isinstance(f, (HashApp, ConcatSeq))]
            base = KnowledgeBase(facts)
            hashed = base.extend([HashApp((a,)) for a in SMALL])
            self.assertEqual(atoms_in(close(base)), atoms_in(close(hashed)))

    def test_public_only(self):
        kb = KnowledgeBase(public=[Atom("g", "public", 8)])
        self.assertEqual(close(kb).terms, frozenset({Atom("g")}))


class LimitsTest(TestCase):
    def test_size_limit(self):
        kb, _ = p3_kb()
        with self.assertRaises(ClosureLimitExceeded):
            close(kb.with_limits(ClosureLimits(max_size=7)))

    def test_depth_limit_warns(self):
        kb, _ = p3_kb()
        with self.assertWarns(UserWarning):
            closure = close(kb.with_limits(ClosureLimits(max_depth=1)))
        self.assertFalse(closure.saturated)

    def test_depth_cut_off_is_not_underivable(self):
        x = Atom("x")
        goal = parse_term("H(H(H(x)))")
        kb = KnowledgeBase([x], limits=ClosureLimits(max_depth=2))
        with self.assertWarns(UserWarning):
            self.assertIsNone(derivable(kb, goal))
        with self.assertRaises(ClosureLimitExceeded):
            derivable(kb, goal, strict=True)
        trace = derivable(kb.with_limits(ClosureLimits(max_depth=3)), goal, strict=True)
        self.assertEqual(trace.rules(), ["hash-apply"] * 3)

    def test_fixpoint_without_goal_is_silent(self):
        kb = KnowledgeBase([Atom("a")], limits=ClosureLimits(max_depth=2))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            self.assertIsNone(derivable(kb, Atom("b"), strict=True))

    def test_invalid_limits(self):
        with self.assertRaises(ValueError):
            ClosureLimits(max_size=0)

    def test_cyclic_equations(self):
        with self.assertRaises(ValueError):
            KnowledgeBase([], {"a": parse_term("H(b)"), "b": parse_term("a (+) c")})


class KbFileTest(TestCase):
    def test_p2_file(self):
        kb, goal = load_kb(KB_PATH)
        self.assertEqual(goal, Atom("SK"))
        self.assertEqual(len(kb.facts), 3)
        self.assertEqual(len(derivable(kb, goal)), 3)

    def test_syntax_error_location(self):
        text = "facts:\n  M_2\n  H(a, $)\n"
        with self.assertRaises(FixtureParseError) as context:
            parse_kb(text, path="bad.kb")
        self.assertEqual(context.exception.line, 3)
        self.assertEqual(context.exception.column, 8)

    def test_unknown_section(self):
        with self.assertRaises(FixtureParseError):
            parse_kb("rules:\n  a\n")

    def test_public_atoms(self):
        kb, _ = parse_kb("atoms:\n  g public 8\nfacts:\n  a\n")
        self.assertIn(normalize(Atom("g")), close(kb))
