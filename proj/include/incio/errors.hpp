#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace incio {

using Index = Eigen::Index;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// graph validation

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(Index node, Index n)
      : Error("node index " + std::to_string(node) + " out of range for n=" + std::to_string(n)) {}
};

class SelfLoop : public Error {
 public:
  explicit SelfLoop(Index node) : Error("self-loop at node " + std::to_string(node)) {}
};

class DuplicateEdge : public Error {
 public:
  DuplicateEdge(Index i, Index j)
      : Error("duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")") {}
};

class NonpositiveWeight : public Error {
 public:
  NonpositiveWeight(Index i, Index j)
      : Error("edge (" + std::to_string(i) + ", " + std::to_string(j) + ") has a non-positive weight") {}
};

class ZeroStrengthNode : public Error {
 public:
  explicit ZeroStrengthNode(Index node)
      : Error("node " + std::to_string(node) + " has zero strength"), node_(node) {}
  Index node() const noexcept { return node_; }

 private:
  Index node_;
};

class DisconnectedGraph : public Error {
 public:
  explicit DisconnectedGraph(Index components)
      : Error("graph has delta=" + std::to_string(components) +
              " connected components; enable disconnected mode to cluster it"),
        components_(components) {}
  Index components() const noexcept { return components_; }

 private:
  Index components_;
};

// numerics

class NoConvergence : public Error {
 public:
  NoConvergence(Index iterations, double last_residual)
      : Error("no convergence after " + std::to_string(iterations) +
              " matrix-vector products (last residual " + std::to_string(last_residual) + ")"),
        iterations_(iterations),
        last_residual_(last_residual) {}
  Index iterations() const noexcept { return iterations_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  Index iterations_;
  double last_residual_;
};

class TooLargeForDense : public Error {
 public:
  TooLargeForDense(Index n, Index limit)
      : Error("dense eigendecomposition refused for n=" + std::to_string(n) +
              " (limit " + std::to_string(limit) + ")") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(Index expected, Index actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)) {}
};

class BasisFull : public Error {
 public:
  explicit BasisFull(Index n) : Error("eigenbasis already holds all " + std::to_string(n) + " eigenpairs") {}
};

/// Lanczos recurrence hit an invariant subspace. The state stays usable with
/// `step` stored vectors.
class Breakdown : public Error {
 public:
  explicit Breakdown(Index step)
      : Error("Lanczos breakdown at step " + std::to_string(step)), step_(step) {}
  Index step() const noexcept { return step_; }

 private:
  Index step_;
};

// clustering

class KTooLarge : public Error {
 public:
  KTooLarge(Index k, Index n)
      : Error("cannot form K=" + std::to_string(k) + " clusters from " + std::to_string(n) + " rows") {}
};

class ZeroVolumeCluster : public Error {
 public:
  explicit ZeroVolumeCluster(Index cluster)
      : Error("cluster " + std::to_string(cluster) + " has zero volume") {}
};

// ingest

class ParseError : public Error {
 public:
  ParseError(Index line, const std::string& what)
      : Error("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
  Index line() const noexcept { return line_; }

 private:
  Index line_;
};

class KOutOfRange : public Error {
 public:
  KOutOfRange(Index k, Index n)
      : Error("k=" + std::to_string(k) + " must satisfy 1 <= k < n=" + std::to_string(n)) {}
};

// sessions

class SessionClosed : public Error {
 public:
  SessionClosed() : Error("session already accepted") {}
};

/// Another step is already running on the session.
class SessionBusy : public Error {
 public:
  SessionBusy() : Error("a step is already in progress for this session") {}
};

class UnknownSession : public Error {
 public:
  explicit UnknownSession(const std::string& id) : Error("unknown session '" + id + "'") {}
};

class UnknownK : public Error {
 public:
  explicit UnknownK(Index k) : Error("no report recorded for K=" + std::to_string(k)) {}
};

}  // namespace incio
