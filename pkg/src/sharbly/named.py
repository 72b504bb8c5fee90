"""The named cycles z_1, z_2, z_3, their compositions, and a small expression parser."""
import os
import re

from .chains import SharblyError, compose, from_matrix, load_chain

Z1 = [[1]]
Z2 = [[1, 0, 1],
      [0, 1, -1]]
Z3 = [[1, 0, 0, 1, 0, 1],
      [0, 1, 0, -1, 1, 0],
      [0, 0, 1, 0, -1, -1]]


def z1():
    return from_matrix(Z1)


def z2():
    return from_matrix(Z2)


def z3():
    return from_matrix(Z3)


def z4():
    return compose(z3(), z1())


def z3k(k):
    """z_{3k}: z_3 for k = 1, then compose(z_3, z_{3k-3})."""
    if k < 1:
        raise SharblyError("z3k needs k >= 1")
    z = z3()
    for _ in range(k - 1):
        z = compose(z3(), z)
    return z


def z3k1(k):
    """z_{3k+1}: z_1 for k = 0, then compose(z_3, z_{3k-2})."""
    if k < 0:
        raise SharblyError("z3k1 needs k >= 0")
    z = z1()
    for _ in range(k):
        z = compose(z3(), z)
    return z


def z_of_dimension(n):
    """The named cycle for SL_n(Z): n = 1, 2, or n = 3k, 3k+1."""
    if n == 2:
        return z2()
    if n % 3 == 0 and n > 0:
        return z3k(n // 3)
    if n % 3 == 1:
        return z3k1(n // 3)
    raise SharblyError("no named cycle for n = %d" % n)


_CALL = re.compile(r"^(z3k1|z3k)\((\d+)\)$")


def _split_args(inner):
    depth = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return inner[:i], inner[i + 1:]
    raise SharblyError("compose needs two arguments")


def build_named(name):
    """Chain for a name such as 'z3', 'z3k(2)', 'z3k1(1)', 'compose(z3,z1)' or a JSON file path."""
    text = name.strip().replace(" ", "")
    m = _CALL.match(text)
    if m:
        k = int(m.group(2))
        return z3k(k) if m.group(1) == "z3k" else z3k1(k)
    if text.startswith("compose(") and text.endswith(")"):
        left, right = _split_args(text[len("compose("):-1])
        return compose(build_named(left), build_named(right))
    if re.fullmatch(r"z\d+", text):
        return z_of_dimension(int(text[1:]))
    if os.path.exists(name):
        return load_chain(name)
    raise SharblyError("unknown chain name %r" % name)
