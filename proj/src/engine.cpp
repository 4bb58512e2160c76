#include "resolv/engine.hpp"

#include "ensemble.hpp"
#include "resolv/error.hpp"
#include "resolv/rng.hpp"
#include "resolv/typicality.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

namespace resolv {
namespace {

void require_source_size(const MessageSource& source, Index m, const char* what) {
  if (m < 1) throw DomainError(std::string(what) + ": M must be at least 1");
  if (source.size() != m)
    throw DimensionError(std::string(what) + ": message source has " + std::to_string(source.size()) +
                         " messages but M = " + std::to_string(m));
}

// Divergence of a dense sequence law from a dense target, both in codec order.
double dense_divergence(const Vector& p, const Vector& target) {
  double d = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (target[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * (std::log2(p[i]) - std::log2(target[i]));
  }
  return d > 0.0 ? d : 0.0;
}

double dense_entropy(const Vector& p) {
  double h = 0.0;
  for (Index i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  return h;
}

Vector induced_dense(const Codebook& codebook, const ChannelMatrix& channel, const Vector& weights) {
  Vector out = Vector::Zero(checked_power(channel.output_size(), codebook.block_length()));
  for (Index w = 0; w < codebook.size(); ++w) {
    if (weights[w] == 0.0) continue;
    out.noalias() += weights[w] * sequence_likelihood(codebook.word(w), channel);
  }
  return out;
}

template <typename Fn>
void parallel_for(Index count, Fn&& fn) {
  const auto hw = std::max(1u, std::thread::hardware_concurrency());
  const Index workers = std::min<Index>(count, static_cast<Index>(hw));
  if (workers <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    for (Index t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (Index i = t; i < count; i += workers) fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Messages grouped by probability. Uniform sources are one class of M typical
// messages; bit streams are grouped by their number of zero bits.
struct MessageClass {
  double probability;
  double multiplicity;
  bool typical;
};

std::vector<MessageClass> message_classes(const MessageSource& source, double epsilon) {
  if (source.kind() == MessageSource::Kind::Uniform)
    return {{1.0 / static_cast<double>(source.size()), static_cast<double>(source.size()), true}};
  const int bits = source.bits();
  const double p = source.p();
  const Pmf bit_law{p, 1.0 - p};
  const TypicalityParams params(epsilon, bits);
  std::vector<MessageClass> out;
  for (int zeros = 0; zeros <= bits; ++zeros) {
    const std::vector<Index> counts{zeros, bits - zeros};
    const double log_choose = std::lgamma(bits + 1.0) - std::lgamma(zeros + 1.0) - std::lgamma(bits - zeros + 1.0);
    out.push_back({std::pow(p, zeros) * std::pow(1.0 - p, bits - zeros), std::exp(log_choose),
                   is_typical_type(counts, bit_law, params)});
  }
  return out;
}

}  // namespace

// --- Codebook -------------------------------------------------------------

Codebook::Codebook(int n, Index alphabet, std::vector<Symbol> symbols)
    : n_(n), alphabet_(alphabet), symbols_(std::move(symbols)) {
  if (n < 1) throw DomainError("Codebook: block length must be positive");
  if (alphabet < 1) throw DimensionError("Codebook: empty alphabet");
  if (symbols_.empty() || symbols_.size() % static_cast<std::size_t>(n) != 0)
    throw DimensionError("Codebook: symbol count is not a positive multiple of n");
  for (Symbol s : symbols_)
    if (s < 0 || s >= alphabet) throw DimensionError("Codebook: symbol outside alphabet");
}

Codebook::Codebook(Index alphabet, const std::vector<std::vector<Symbol>>& words)
    : Codebook(words.empty() ? 0 : static_cast<int>(words.front().size()), alphabet, [&] {
        std::vector<Symbol> flat;
        for (const auto& w : words) {
          if (w.size() != words.front().size()) throw DimensionError("Codebook: words differ in length");
          flat.insert(flat.end(), w.begin(), w.end());
        }
        return flat;
      }()) {}

std::span<const Symbol> Codebook::word(Index w) const {
  if (w < 0 || w >= size()) throw DimensionError("Codebook::word: index out of range");
  return std::span<const Symbol>(symbols_).subspan(static_cast<std::size_t>(w * n_), static_cast<std::size_t>(n_));
}

// --- MessageSource --------------------------------------------------------

MessageSource MessageSource::uniform(Index m) {
  if (m < 1) throw DomainError("MessageSource::uniform: M must be at least 1");
  return MessageSource(Kind::Uniform, m, 0, 0.5);
}

MessageSource MessageSource::bit_stream(int bits, double p) {
  if (bits < 1 || bits > 40) throw DomainError("MessageSource::bit_stream: bit count must lie in [1, 40]");
  if (!(p > 0.0 && p <= 0.5)) throw DomainError("MessageSource::bit_stream: p must lie in (0, 1/2]");
  return MessageSource(Kind::BitStream, Index{1} << bits, bits, p);
}

double MessageSource::probability(Index w) const {
  if (w < 0 || w >= size_) throw DimensionError("MessageSource::probability: message out of range");
  if (kind_ == Kind::Uniform) return 1.0 / static_cast<double>(size_);
  const int ones = std::popcount(static_cast<std::uint64_t>(w));
  const int zeros = bits_ - ones;
  return std::pow(p_, zeros) * std::pow(1.0 - p_, ones);
}

Vector MessageSource::weights() const {
  if (size_ > kMaxDenseStates) throw CapExceeded("MessageSource::weights: too many messages");
  Vector out(size_);
  for (Index w = 0; w < size_; ++w) out[w] = probability(w);
  return out;
}

std::string MessageSource::name() const { return kind_ == Kind::Uniform ? "uniform" : "bitstream"; }

double block_rate(int n, Index m) {
  if (n < 1 || m < 1) throw DomainError("block_rate: n and M must be positive");
  return std::log2(static_cast<double>(m)) / n;
}

// --- Codebooks and induced laws ---------------------------------------------

Codebook sample_codebook(const Pmf& input, int n, Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw DomainError("sample_codebook: n and M must be positive");
  Rng rng(seed);
  std::vector<Symbol> symbols(static_cast<std::size_t>(n * m));
  for (auto& s : symbols) s = rng.sample(input);
  return Codebook(n, input.size(), std::move(symbols));
}

Pmf induced_output_distribution(const Codebook& codebook, const ChannelMatrix& channel, const MessageSource& source) {
  if (codebook.alphabet() != channel.input_size())
    throw DimensionError("induced_output_distribution: codebook alphabet differs from channel input");
  require_source_size(source, codebook.size(), "induced_output_distribution");
  return Pmf(induced_dense(codebook, channel, source.weights()));
}

double divergence_to_target(const Codebook& codebook, const ChannelMatrix& channel, const MessageSource& source,
                            const Pmf& target) {
  if (target.size() != channel.output_size()) throw DimensionError("divergence_to_target: target alphabet mismatch");
  const Pmf induced = induced_output_distribution(codebook, channel, source);
  return kl_divergence(induced, product_extension(target, codebook.block_length()));
}

// --- Exact ensemble averages ----------------------------------------------

double exact_expected_divergence(const Pmf& input, const ChannelMatrix& channel, const Pmf& target, int n, Index m,
                                 const MessageSource& source) {
  require_source_size(source, m, "exact_expected_divergence");
  if (target.size() != channel.output_size())
    throw DimensionError("exact_expected_divergence: target alphabet mismatch");
  const detail::EnsembleEnumerator ensemble(input, channel, n, source);
  const Vector target_n = product_extension(target, n).probs();
  const Matrix& likelihood = ensemble.likelihood();
  const Vector& weights = ensemble.message_weights();

  double expectation = 0.0;
  bool infinite = false;
  ensemble.for_each([&](double prob, std::span<const Index> words, const Vector& induced) {
    double inner = 0.0;
    for (Index w = 0; w < m; ++w) {
      if (weights[w] == 0.0) continue;
      const auto row = likelihood.row(words[static_cast<std::size_t>(w)]);
      double sent = 0.0;
      for (Index v = 0; v < row.size(); ++v) {
        if (row[v] <= 0.0) continue;
        if (target_n[v] <= 0.0) {
          infinite = true;
          return;
        }
        sent += row[v] * (std::log2(induced[v]) - std::log2(target_n[v]));
      }
      inner += weights[w] * sent;
    }
    expectation += prob * inner;
  });
  if (infinite) return std::numeric_limits<double>::infinity();
  return expectation > 0.0 ? expectation : 0.0;
}

double codebook_output_mutual_information(const Pmf& input, const ChannelMatrix& channel, const Pmf& target, int n,
                                          Index m, const MessageSource& source) {
  require_source_size(source, m, "codebook_output_mutual_information");
  const Pmf marginal = output_marginal(input, channel);
  if (target.size() != marginal.size() || (target.probs() - marginal.probs()).cwiseAbs().maxCoeff() > 1e-9)
    throw DomainError("codebook_output_mutual_information: target is not the output marginal of the input law");
  const detail::EnsembleEnumerator ensemble(input, channel, n, source);

  Vector ensemble_output = Vector::Zero(ensemble.output_states());
  double conditional = 0.0;
  ensemble.for_each([&](double prob, std::span<const Index>, const Vector& induced) {
    ensemble_output.noalias() += prob * induced;
    conditional += prob * dense_entropy(induced);
  });
  const double info = dense_entropy(ensemble_output) - conditional;
  return info > 0.0 ? info : 0.0;
}

// --- Monte Carlo ------------------------------------------------------------

MonteCarloEstimate monte_carlo_expected_divergence(const Pmf& input, const ChannelMatrix& channel, const Pmf& target,
                                                   int n, Index m, const MessageSource& source, Index trials,
                                                   std::uint64_t seed, bool keep_samples) {
  if (trials < 1) throw DomainError("monte_carlo_expected_divergence: trials must be positive");
  require_source_size(source, m, "monte_carlo_expected_divergence");
  if (input.size() != channel.input_size() || target.size() != channel.output_size())
    throw DimensionError("monte_carlo_expected_divergence: alphabet mismatch");
  const Vector target_n = product_extension(target, n).probs();
  const Vector weights = source.weights();

  std::vector<double> samples(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](Index t) {
    const Codebook codebook = sample_codebook(input, n, m, derive_seed(seed, static_cast<std::uint64_t>(t)));
    samples[static_cast<std::size_t>(t)] = dense_divergence(induced_dense(codebook, channel, weights), target_n);
  });

  MonteCarloEstimate est;
  est.trials = trials;
  double sum = 0.0;
  for (Index t = 0; t < trials; ++t) {
    const double d = samples[static_cast<std::size_t>(t)];
    if (!std::isfinite(d))
      throw NumericalError("monte_carlo_expected_divergence: trial " + std::to_string(t) +
                           " produced an infinite divergence (a codeword left supp(Q_U) or the target excludes a "
                           "reachable output); trial set aborted");
    sum += d;
  }
  est.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0.0;
    for (double d : samples) ss += (d - est.mean) * (d - est.mean);
    est.std_error = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
  } else {
    est.std_error = std::numeric_limits<double>::quiet_NaN();
  }
  if (keep_samples) est.samples = std::move(samples);
  return est;
}

// --- d-term decomposition -----------------------------------------------------

DecompositionBounds decomposition_bounds(const JointPmf& joint, int n, Index m, double epsilon,
                                         const MessageSource& source) {
  require_source_size(source, m, "decomposition_bounds");
  if (!(epsilon >= 0.0)) throw DomainError("decomposition_bounds: epsilon must be non-negative");
  const double info = mutual_information(joint);
  const double h_v = entropy(joint.output_marginal());
  const auto mu = mu_constants(joint);
  const double rate = block_rate(n, m);
  const double nu = static_cast<double>(joint.input_size());
  const double nv = static_cast<double>(joint.output_size());
  const double log2e = std::numbers::log2e;

  DecompositionBounds b;
  double effective_rate = rate;
  if (source.kind() == MessageSource::Kind::BitStream) {
    const double h2 = binary_entropy(source.p());
    effective_rate = rate * h2;
    b.delta_eps = epsilon * (2.0 * h_v + rate * h2);
  } else {
    b.delta_eps = 2.0 * epsilon * h_v;
  }
  b.d1_bound = log2e * std::exp2(-n * (effective_rate - info - b.delta_eps));
  b.d2_bound = 2.0 * nv * nu * std::exp(-2.0 * n * epsilon * epsilon * mu.mu_uv * mu.mu_uv) * n *
               std::log2(1.0 / mu.mu_v + 1.0);
  if (source.kind() == MessageSource::Kind::BitStream) {
    const double p = source.p();
    // log2((1/mu_V)^n + 1), evaluated without overflow.
    const double log_inv = n * std::log2(1.0 / mu.mu_v);
    const double log_term = log_inv + std::log2(1.0 + std::exp2(-log_inv));
    b.d3_bound = 4.0 * std::exp(-2.0 * n * epsilon * epsilon * p * p) * log_term;
  }
  return b;
}

DivergenceDecomposition decompose_divergence_bound(const JointPmf& joint, int n, Index m, double epsilon,
                                                   const MessageSource& source) {
  DivergenceDecomposition out;
  out.bounds = decomposition_bounds(joint, n, m, epsilon, source);

  const Index nu = joint.input_size();
  const Index nv = joint.output_size();
  Index input_states = 0;
  Index output_states = 0;
  try {
    input_states = checked_power(nu, n);
    output_states = checked_power(nv, n);
    if (input_states > kMaxDenseStates / output_states) throw CapExceeded("pair enumeration");
  } catch (const CapExceeded&) {
    out.exact = false;
    out.d1 = out.d2 = out.d3 = out.total = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  const ChannelMatrix channel = joint.conditional();
  const Pmf qu = joint.input_marginal();
  const Vector input_n = product_extension(qu, n).probs();
  const Vector output_n = product_extension(joint.output_marginal(), n).probs();
  const Pmf pair_law = joint.flattened();
  const TypicalityParams params(epsilon, n);
  const SequenceCodec u_codec(nu, n);
  const SequenceCodec v_codec(nv, n);
  const auto classes = message_classes(source, epsilon);

  std::vector<Symbol> u(static_cast<std::size_t>(n));
  std::vector<Symbol> v(static_cast<std::size_t>(n));
  std::vector<Index> counts(static_cast<std::size_t>(nu * nv));
  for (Index s = 0; s < input_states; ++s) {
    if (input_n[s] <= 0.0) continue;
    u_codec.decode_into(s, u);
    const Vector likelihood = sequence_likelihood(u, channel);
    for (Index t = 0; t < output_states; ++t) {
      const double pair = input_n[s] * likelihood[t];
      if (pair <= 0.0) continue;
      v_codec.decode_into(t, v);
      std::fill(counts.begin(), counts.end(), 0);
      for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(u[i] * nv + v[i])];
      const bool pair_typical = is_typical_type(counts, pair_law, params);
      const double ratio = likelihood[t] / output_n[t];
      for (const auto& cls : classes) {
        const double term = cls.multiplicity * cls.probability * pair * std::log2(cls.probability * ratio + 1.0);
        out.total += term;
        if (!cls.typical)
          out.d3 += term;
        else if (pair_typical)
          out.d1 += term;
        else
          out.d2 += term;
      }
    }
  }
  out.exact = true;
  return out;
}

double achievability_threshold(const JointPmf& joint, const MessageSource& source) {
  const double info = mutual_information(joint);
  if (source.kind() == MessageSource::Kind::BitStream) return info / binary_entropy(source.p());
  return info;
}

// --- Ensemble enumerator ------------------------------------------------------

namespace detail {

EnsembleEnumerator::EnsembleEnumerator(const Pmf& input, const ChannelMatrix& channel, int n,
                                       const MessageSource& source) {
  if (input.size() != channel.input_size()) throw DimensionError("ensemble: input alphabet mismatch");
  if (n < 1) throw DomainError("ensemble: n must be positive");
  const Index m = source.size();
  const Index input_states = checked_power(input.size(), n);
  const Index output_states = checked_power(channel.output_size(), n);
  Index codebooks = 1;
  for (Index w = 0; w < m; ++w) {
    if (codebooks > kMaxEnumeratedCodebooks / input_states)
      throw CapExceeded("exact enumeration needs |U|^(nM) = " + std::to_string(input.size()) + "^(" +
                        std::to_string(n) + "*" + std::to_string(m) + ") codebooks, above the cap of " +
                        std::to_string(kMaxEnumeratedCodebooks));
    codebooks *= input_states;
  }
  if (input_states > kMaxDenseStates / output_states) throw CapExceeded("ensemble: likelihood table too large");

  const SequenceCodec codec(input.size(), n);
  input_probs_ = product_extension(input, n).probs();
  likelihood_.resize(input_states, output_states);
  std::vector<Symbol> word(static_cast<std::size_t>(n));
  for (Index s = 0; s < input_states; ++s) {
    codec.decode_into(s, word);
    likelihood_.row(s) = sequence_likelihood(word, channel).transpose();
    if (input_probs_[s] > 0.0) positive_.push_back(s);
  }
  weights_ = source.weights();
}

}  // namespace detail

}  // namespace resolv
