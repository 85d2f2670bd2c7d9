"""Tests for symbolic terms: normal form, parsing and evaluation."""

from unittest import TestCase

import numpy as np

from mfaudit.errors import LengthMismatchError, TermSyntaxError, UnboundAtomError
from mfaudit.primitives import DEFAULT_SUITE, ModGroup, hash_fields, xor
from mfaudit.terms import (
    Atom,
    ConcatSeq,
    GroupAdd,
    HashApp,
    ScalarOfHash,
    SymDec,
    SymEnc,
    XorSum,
    Zero,
    evaluate,
    normalize,
    parse_term,
    render,
)

P = DEFAULT_SUITE.modulus
ELEMENT = DEFAULT_SUITE.element_length

# A small alphabet of digest-length atoms, plus two group scalars.
ATOMS = [Atom(name, "secret", 32) for name in ("a", "b", "c", "d", "e")]
SCALARS = [Atom(name, "secret", ELEMENT) for name in ("x", "y")]


def random_term(rng, depth=3):
    """A random 32-byte term over ATOMS (and scalars under a hash)."""
    if depth == 0 or rng.random() < 0.3:
        return ATOMS[rng.integers(len(ATOMS))]
    choice = rng.integers(6)
    if choice == 0:
        size = int(rng.integers(2, 5))
        return XorSum(tuple(random_term(rng, depth - 1) for _ in range(size)))
    if choice == 1:
        return HashApp((random_term(rng, depth - 1), SCALARS[rng.integers(2)]))
    if choice == 2:
        key = random_term(rng, depth - 1)
        return SymDec(key, SymEnc(key, random_term(rng, depth - 1)))
    if choice == 3:
        return HashApp((random_group_term(rng, depth - 1),))
    if choice == 4:
        parts = (random_term(rng, depth - 1), random_group_term(rng, depth - 1))
        return HashApp((ConcatSeq(parts),))
    return XorSum((random_term(rng, depth - 1), Zero(32)))


def random_group_term(rng, depth=2):
    """
    A random term whose operands mix scalars with digest-length atoms, so
    that some sums reduce their operands modulo P.

    """
    if depth == 0 or rng.random() < 0.2:
        choice = rng.integers(3)
        if choice == 0:
            return SCALARS[rng.integers(2)]
        if choice == 1:
            return ATOMS[rng.integers(len(ATOMS))]
        return ScalarOfHash(random_term(rng, max(depth - 1, 0)), P)
    operands = []
    for _ in range(int(rng.integers(1, 4))):
        operand = random_group_term(rng, depth - 1)
        c = (1, P - 1, int(rng.integers(2, 1000)))[rng.integers(3)]
        operands.append((c, operand))
        if rng.random() < 0.3:
            # Cancels the operand just added.
            operands.append((P - c, operand))
    return GroupAdd(tuple(operands), P)


def random_env(rng):
    env = {atom.name: rng.bytes(32) for atom in ATOMS}
    grp = ModGroup(P)
    env.update({s.name: grp.encode(grp.random_element(rng)) for s in SCALARS})
    return env


class NormalizeTest(TestCase):
    def setUp(self):
        self.symbols = {a.name: a for a in ATOMS}

    def parse(self, text):
        return parse_term(text, symbols=self.symbols)

    def test_cancellation(self):
        self.assertEqual(normalize(self.parse("a (+) b (+) a")), Atom("b"))

    def test_identity(self):
        self.assertEqual(normalize(self.parse("a (+) 0")), Atom("a"))

    def test_defined_identity_cancels(self):
        # GID_i (+) ID_i with GID_i := ID_i (+) V_1.
        gid = self.parse("ID_i (+) V_1")
        term = XorSum((gid, Atom("ID_i")))
        self.assertEqual(normalize(term), Atom("V_1"))

    def test_no_nested_sums(self):
        term = normalize(self.parse("a (+) (b (+) (c (+) d))"))
        self.assertIsInstance(term, XorSum)
        self.assertFalse(any(isinstance(t, XorSum) for t in term.elements))

    def test_concat_flattened(self):
        term = normalize(self.parse("CAT(a, CAT(b, c))"))
        self.assertEqual(term, ConcatSeq((Atom("a"), Atom("b"), Atom("c"))))

    def test_decrypt_encrypt(self):
        self.assertEqual(normalize(self.parse("DEC(k, ENC(k, m))")), Atom("m"))
        self.assertIsInstance(normalize(self.parse("DEC(k, ENC(j, m))")), SymDec)

    def test_group_subtraction(self):
        term = normalize(self.parse("(x .+ SOH(H(a, b))) .- SOH(H(a, b))"))
        self.assertEqual(term, Atom("x"))

    def test_lone_digest_operand_keeps_its_sum(self):
        # A digest-length operand is reduced modulo P by the sum around it.
        term = normalize(self.parse("a .+ b .- b"))
        self.assertEqual(term, GroupAdd(((1, Atom("a")),), P))
        self.assertEqual(normalize(self.parse("a .+ 0")), GroupAdd(((1, Atom("a")),), P))

    def test_group_coefficients(self):
        term = normalize(self.parse("x .+ x .+ y"))
        self.assertIsInstance(term, GroupAdd)
        self.assertEqual(term.coefficient(Atom("x")), 2)

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            once = normalize(random_term(rng))
            self.assertEqual(normalize(once), once)

    def test_order_independent(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            elements = [random_term(rng, 2) for _ in range(4)]
            reference = normalize(XorSum(tuple(elements)))
            for _ in range(5):
                shuffled = [elements[i] for i in rng.permutation(4)]
                regrouped = XorSum((XorSum(tuple(shuffled[:2])), XorSum(tuple(shuffled[2:]))))
                self.assertEqual(normalize(regrouped), reference)


class EvaluateTest(TestCase):
    def test_atom(self):
        self.assertEqual(evaluate(Atom("a"), {"a": b"xyz"}), b"xyz")

    def test_unbound(self):
        with self.assertRaises(UnboundAtomError):
            evaluate(Atom("a"), {})

    def test_declared_length(self):
        with self.assertRaises(LengthMismatchError):
            evaluate(Atom("a", "secret", 4), {"a": b"xyz"})

    def test_xor_length_mismatch(self):
        with self.assertRaises(LengthMismatchError):
            evaluate(XorSum((Atom("a"), Atom("b"))), {"a": b"xy", "b": b"xyz"})

    def test_hash_of_fields(self):
        env = {"MID": b"m" * 32, "x_s": b"s" * 32}
        term = parse_term("H(MID, x_s)")
        self.assertEqual(evaluate(term, env), hash_fields(env["MID"], env["x_s"]))

    def test_homomorphic_xor(self):
        env = {"a": b"\x01" * 4, "b": b"\x10" * 4}
        self.assertEqual(evaluate(parse_term("a (+) b"), env), xor(env["a"], env["b"]))

    def test_normal_form_preserves_value(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            term = random_term(rng)
            env = random_env(rng)
            self.assertEqual(evaluate(normalize(term), env), evaluate(term, env))

    def test_group_normal_form_preserves_value(self):
        rng = np.random.default_rng(6)
        for _ in range(500):
            term = random_group_term(rng, 3)
            env = random_env(rng)
            self.assertEqual(evaluate(normalize(term), env), evaluate(term, env))

    def test_cancelled_operand_reduces_digest(self):
        symbols = {atom.name: atom for atom in ATOMS}
        term = parse_term("a .+ b .- b", symbols=symbols)
        grp = ModGroup(P)
        env = {"a": b"\xff" * 32, "b": bytes(range(32))}
        expected = grp.encode(grp.decode(env["a"]))
        self.assertNotEqual(expected, env["a"])
        self.assertEqual(evaluate(term, env), expected)
        self.assertEqual(evaluate(normalize(term), env), expected)

    def test_equal_normal_forms_evaluate_equal(self):
        rng = np.random.default_rng(3)
        left = XorSum((Atom("a"), XorSum((Atom("b"), Atom("a"))), Atom("c")))
        right = XorSum((Atom("c"), Atom("b")))
        self.assertEqual(normalize(left), normalize(right))
        for _ in range(100):
            env = random_env(rng)
            self.assertEqual(evaluate(left, env), evaluate(right, env))

    def test_group_arithmetic(self):
        grp = ModGroup(P)
        env = {"x": grp.encode(5), "y": grp.encode(P - 2)}
        self.assertEqual(evaluate(parse_term("x .+ y"), env), grp.encode(3))
        self.assertEqual(evaluate(parse_term("x .- y"), env), grp.encode(7))

    def test_concat_slices(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            a, b = rng.bytes(32), rng.bytes(int(rng.integers(1, 20)))
            value = evaluate(parse_term("CAT(H(a), b)"), {"a": a, "b": b})
            self.assertEqual(value[:32], hash_fields(a))
            self.assertEqual(value[32:], b)


class ParserTest(TestCase):
    def test_render_round_trip(self):
        for text in [
            "H(a, b)",
            "a (+) b (+) c",
            "x .+ y .- SOH(H(r1, r2))",
            "CAT(H(K_sh (+) U_rg), ID_ur)",
            "ENC(K_X, CAT(H_U, R_U))",
            "TAG(K, d, i)",
            "REP(w, tau)",
            "GMUL(x, g)",
            "HID_i' (+) T_1",
        ]:
            term = parse_term(text)
            self.assertEqual(parse_term(render(term)), term)

    def test_render_normal_forms(self):
        rng = np.random.default_rng(5)
        symbols = {atom.name: atom for atom in ATOMS + SCALARS}
        for _ in range(200):
            term = normalize(random_term(rng))
            parsed = parse_term(render(term), symbols=dict(symbols))
            self.assertEqual(normalize(parsed), term)

    def test_single_operands(self):
        self.assertEqual(parse_term("a"), Atom("a"))
        self.assertEqual(parse_term("(a)"), Atom("a"))
        term = parse_term("a (+) b")
        self.assertEqual(term, XorSum((Atom("a"), Atom("b"))))
        self.assertTrue(all(isinstance(t, Atom) for t in term.elements))
        term = parse_term("a .+ 2*b")
        self.assertEqual(term.terms, ((1, Atom("a")), (2, Atom("b"))))
        self.assertEqual(parse_term("H(a, b)"), HashApp((Atom("a"), Atom("b"))))

    def test_mixed_operators(self):
        with self.assertRaises(TermSyntaxError):
            parse_term("a (+) b .+ c")

    def test_column_reported(self):
        with self.assertRaises(TermSyntaxError) as context:
            parse_term("H(a, $b)")
        self.assertEqual(context.exception.column, 6)

    def test_unknown_function(self):
        with self.assertRaises(TermSyntaxError):
            parse_term("F(a)")

    def test_strict_symbols(self):
        with self.assertRaises(TermSyntaxError):
            parse_term("a (+) b", symbols={"a": Atom("a")}, strict=True)

    def test_explicit_modulus(self):
        term = parse_term("a .+ b mod 7")
        self.assertEqual(term.modulus, 7)
