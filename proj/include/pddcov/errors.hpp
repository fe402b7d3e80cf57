#pragma once

#include <stdexcept>
#include <string>

namespace pddcov {

// Base class for every library error. code() is a stable short tag; the CLI
// maps it into the structured stderr diagnostic.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct BadInput : Error {
  explicit BadInput(const std::string& m) : Error("BadInput", m) {}
};

struct BadParam : Error {
  explicit BadParam(const std::string& m) : Error("BadParam", m) {}
};

struct BadLag : Error {
  explicit BadLag(const std::string& m) : Error("BadLag", m) {}
};

struct BadDiagonal : Error {
  explicit BadDiagonal(const std::string& m) : Error("BadDiagonal", m) {}
};

struct DegenerateInput : Error {
  explicit DegenerateInput(const std::string& m) : Error("DegenerateInput", m) {}
};

struct ZeroVariance : Error {
  explicit ZeroVariance(int index)
      : Error("ZeroVariance",
              "series " + std::to_string(index) + " has zero sample variance"),
        index(index) {}
  int index;
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& m) : Error("SingularMatrix", m) {}
};

struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& m)
      : Error("NotPositiveDefinite", m) {}
};

struct DimMismatch : Error {
  explicit DimMismatch(const std::string& m) : Error("DimMismatch", m) {}
};

struct TooLarge : Error {
  explicit TooLarge(const std::string& m) : Error("TooLarge", m) {}
};

struct TooSmall : Error {
  explicit TooSmall(const std::string& m) : Error("TooSmall", m) {}
};

struct OutOfRange : Error {
  explicit OutOfRange(const std::string& m) : Error("OutOfRange", m) {}
};

struct Infeasible : Error {
  explicit Infeasible(const std::string& m) : Error("Infeasible", m) {}
};

struct NotConverged : Error {
  NotConverged(const std::string& m, int iterations, double residual)
      : Error("NotConverged", m), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

struct IndefiniteEstimate : Error {
  explicit IndefiniteEstimate(const std::string& m)
      : Error("IndefiniteEstimate", m) {}
};

struct FitFailed : Error {
  FitFailed(const std::string& m, double max_rel_err)
      : Error("FitFailed", m), max_rel_err(max_rel_err) {}
  double max_rel_err;
};

struct TooFewLags : Error {
  explicit TooFewLags(const std::string& m) : Error("TooFewLags", m) {}
};

struct SingularGammaSS : Error {
  explicit SingularGammaSS(const std::string& m)
      : Error("SingularGammaSS", m) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& m) : Error("SchemaError", m) {}
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error("IoError", m) {}
};

struct BenchAborted : Error {
  explicit BenchAborted(const std::string& m) : Error("BenchAborted", m) {}
};

}  // namespace pddcov
