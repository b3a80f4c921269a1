#pragma once

#include <stdexcept>
#include <string>

namespace qgk {

// Numerical tolerances shared by production code and tests.
struct Tolerances {
  static constexpr double hermitian_input = 1e-10;
  static constexpr double state_norm = 1e-10;
  static constexpr double eig_orthonormality = 1e-10;
  static constexpr double eig_reconstruction = 1e-9;  // relative to ‖H‖∞
  static constexpr double generator_structure = 1e-12;
  static constexpr double generator_orthogonality = 1e-10;
  static constexpr double pauli_reconstruction = 1e-10;
  static constexpr double pauli_imaginary = 1e-12;
  static constexpr double group_frobenius = 1e-9;
  static constexpr double unitarity = 1e-9;
  static constexpr double kernel_symmetry = 1e-10;
  static constexpr double kernel_diagonal = 1e-10;
  static constexpr double kernel_range = 1e-10;
  static constexpr double kernel_psd_per_sample = 1e-8;  // min eig ≥ −tol·n
  static constexpr double phase_anchor = 1e-12;
};

constexpr int kMaxQubits = 8;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated input contract: wrong shape, out-of-range index, non-Hermitian matrix.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Inconsistent grouping / experiment configuration.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Zero-norm kernels, single-class label vectors and similar.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qgk
