#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lp/function_base.hpp"

namespace lp {

struct EmbeddingVector {
  std::vector<float> components;
  std::size_t dimension() const { return components.size(); }
};

// Dot product; throws std::invalid_argument on dimension mismatch.
double dot(const EmbeddingVector& a, const EmbeddingVector& b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(std::string_view text) const = 0;
  virtual std::size_t dimension() const = 0;
};

// Deterministic bag-of-words feature hashing: lowercase, split on
// non-alphanumerics, FNV-1a bucket per token, L2-normalized counts.
class HashingEmbedder : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dim = 256) : dim_(dim) {}
  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dimension() const override { return dim_; }

 private:
  std::size_t dim_;
};

// Posts text to an external embedding service (see docs/wire_formats.md);
// falls back to the hashing embedder with a logged warning on any failure.
class RemoteEmbedder : public Embedder {
 public:
  RemoteEmbedder(std::string host, int port, std::size_t dim = 256);
  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dimension() const override { return fallback_.dimension(); }

 private:
  std::string host_;
  int port_;
  HashingEmbedder fallback_;
};

struct RetrievalQuery {
  std::string instructions;
  std::string state_summary;
  std::optional<int> stage_hint;
  std::string text() const;
};

struct RankedCandidates {
  std::vector<std::pair<std::string, double>> items;  // non-increasing scores
  bool contains(std::string_view name) const;
};

class Retriever {
 public:
  Retriever(const FunctionBase& base, std::shared_ptr<const Embedder> embedder);

  double score(const FunctionSpec& f, const RetrievalQuery& q) const;
  // The K highest-scoring functions, ties broken lexicographically by name.
  // K >= 1 required; throws std::invalid_argument on an empty base. When the
  // base fits in K the whole base is the candidate list.
  RankedCandidates top_k(const RetrievalQuery& q, std::size_t k) const;

  const Embedder& embedder() const { return *embedder_; }

 private:
  const FunctionBase* base_;
  std::shared_ptr<const Embedder> embedder_;
  std::vector<EmbeddingVector> doc_vectors_;  // aligned with base entries
};

}  // namespace lp
