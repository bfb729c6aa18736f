#pragma once

#include "compound/types.hpp"

#include <span>

namespace compound {

/// Determinant by LU with partial pivoting.
double determinant(const Matrix& a);

/// k-th multiplicative compound: entry (i,j) is det(X[I,J]) for the i-th and j-th
/// lexicographic k-tuples of rows and columns. Shape binom(n,k) x binom(m,k).
Matrix compound(const Matrix& x, int k);

/// u_1 ∧ ... ∧ u_k in the lexicographic basis of the k-th exterior power.
Vector wedge(std::span<const Vector> factors);
/// Wedge of the columns of `factors`.
Vector wedge(const Matrix& factors);

/// Matrix of x -> x ∧ z for z in the k-th exterior power of R^n.
/// Its kernel is the k-dimensional subspace of a decomposable, non-zero z.
struct WedgeMatrix {
    Matrix data;  // binom(n,k+1) x n
    int ambient = 0;
    int grade = 0;
};

WedgeMatrix wedge_matrix(const Vector& z, int n, int k);

struct Decomposability {
    bool decomposable = false;
    Matrix kernel;  // orthonormal basis of ker(M_z), n x dim
};

/// z is numerically decomposable iff ker(M_z) has dimension exactly k.
Decomposability is_decomposable(const Vector& z, int n, int k, const TolerancePolicy& policy);

/// Classical adjugate from cofactors: adj(A)_{ij} = (-1)^{i+j} det(A without row j, column i).
Matrix adjugate(const Matrix& a);

/// S: diag((-1)^i); P: anti-diagonal exchange matrix (indices 1-based).
struct SignReversalPair {
    Matrix s;
    Matrix p;
};

SignReversalPair sign_reversal_pair(int n);

/// adj(A) = S P C_{n-1}(A)^T P S.
Matrix adjugate_via_compound(const Matrix& a);

} // namespace compound
