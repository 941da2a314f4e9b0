#include "lp/retriever.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace lp {

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("embedding dimension mismatch: " +
                                std::to_string(a.dimension()) + " vs " +
                                std::to_string(b.dimension()));
  double s = 0.0;
  for (std::size_t i = 0; i < a.components.size(); ++i)
    s += static_cast<double>(a.components[i]) *
         static_cast<double>(b.components[i]);
  return s;
}

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

EmbeddingVector HashingEmbedder::embed(std::string_view text) const {
  EmbeddingVector v;
  v.components.assign(dim_, 0.0f);

  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    v.components[fnv1a(token) % dim_] += 1.0f;
    token.clear();
  };
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c))
      token.push_back(static_cast<char>(std::tolower(c)));
    else
      flush();
  }
  flush();

  double norm = 0.0;
  for (float x : v.components) norm += static_cast<double>(x) * x;
  if (norm > 0.0) {
    float inv = static_cast<float>(1.0 / std::sqrt(norm));
    for (float& x : v.components) x *= inv;
  }
  return v;
}

RemoteEmbedder::RemoteEmbedder(std::string host, int port, std::size_t dim)
    : host_(std::move(host)), port_(port), fallback_(dim) {}

EmbeddingVector RemoteEmbedder::embed(std::string_view text) const {
  httplib::Client cli(host_, port_);
  cli.set_connection_timeout(2, 0);
  cli.set_read_timeout(5, 0);
  nlohmann::json req = {{"text", std::string(text)}};
  auto res = cli.Post("/embed", req.dump(), "application/json");
  if (res && res->status == 200) {
    try {
      nlohmann::json body = nlohmann::json::parse(res->body);
      EmbeddingVector v;
      v.components = body.at("vector").get<std::vector<float>>();
      if (v.dimension() == fallback_.dimension()) return v;
      std::cerr << "warning: remote embedder returned dimension "
                << v.dimension() << ", expected " << fallback_.dimension()
                << "; using local embedder\n";
    } catch (const std::exception& e) {
      std::cerr << "warning: bad remote embedder reply (" << e.what()
                << "); using local embedder\n";
    }
  } else {
    std::cerr << "warning: remote embedder unreachable; using local embedder\n";
  }
  return fallback_.embed(text);
}

std::string RetrievalQuery::text() const {
  std::string t = "instructions: " + instructions;
  if (!state_summary.empty()) t += "\nstate: " + state_summary;
  if (stage_hint) t += "\nstage: " + std::to_string(*stage_hint);
  return t;
}

bool RankedCandidates::contains(std::string_view name) const {
  for (const auto& [n, _] : items)
    if (n == name) return true;
  return false;
}

Retriever::Retriever(const FunctionBase& base,
                     std::shared_ptr<const Embedder> embedder)
    : base_(&base), embedder_(std::move(embedder)) {
  doc_vectors_.reserve(base.size());
  for (const FunctionSpec& s : base.entries())
    doc_vectors_.push_back(embedder_->embed(s.document_text()));
}

double Retriever::score(const FunctionSpec& f, const RetrievalQuery& q) const {
  return dot(embedder_->embed(f.document_text()), embedder_->embed(q.text()));
}

RankedCandidates Retriever::top_k(const RetrievalQuery& q,
                                  std::size_t k) const {
  if (k < 1) throw std::invalid_argument("top_k requires K >= 1");
  if (base_->size() == 0) throw std::invalid_argument("empty function base");

  EmbeddingVector qv = embedder_->embed(q.text());
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(base_->size());
  for (std::size_t i = 0; i < base_->size(); ++i)
    scored.emplace_back(base_->entries()[i].name, dot(doc_vectors_[i], qv));

  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > k) scored.resize(k);
  return RankedCandidates{std::move(scored)};
}

}  // namespace lp
