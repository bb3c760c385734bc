#!/usr/bin/env python3
"""Walk through the controller model on a toy three-chain design.

A gating controller is just a binary matrix: row i lists the control
bits XORed together to produce chain i's enable signal. Encoding a test
cube means solving that XOR system so every chain the cube needs comes
out enabled.
"""

from xorscan import BitMatrix, BitVec, TestCube, XorNet, decode, encode, gf2_solve

# Three chains fed from two control bits. Chain 2 XORs both bits.
net = XorNet.from_matrices(BitMatrix.from_strings(["10", "01", "11"]))
print("controller matrix:")
for i, row in enumerate(net.level1.iter_rows()):
    print(f"  chain {i}: taps {row.to01()}")

# Decoding expands a control word into per-chain enables.
for word in ["00", "10", "11"]:
    z = BitVec.from_string(word)
    print(f"decode(z={word}) -> gating {decode(net, z).to01()}")

# A cube that needs chains 0 and 1 is solvable: z = 11 works, and chain 2
# comes out disabled for free (1 XOR 1 = 0).
cube = TestCube(BitVec.from_string("110"))
result = encode(net, cube, rng=0)
print(f"\nencode usage=110: {result.status.value}, z={result.control_word.to01()}, "
      f"gating={result.gating.to01()}, sca={result.sca:.3f}")

# Needing all three chains is impossible: chains 0 and 1 force both
# control bits to 1, which XOR to 0 on chain 2.
result = encode(net, TestCube(BitVec.from_string("111")), rng=0)
print(f"encode usage=111: {result.status.value}")

# The same contradiction, seen as a plain linear system over GF(2).
sol = gf2_solve(net.level1, BitVec.from_string("111"), rng=0)
print(f"gf2_solve on the full system: {sol.status.value}")
