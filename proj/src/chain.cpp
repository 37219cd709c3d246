#include "decisive/chain.hpp"

#include "decisive/error.hpp"

namespace decisive {

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

const char* certificate_kind_name(DecisivenessCertificate::Kind kind) noexcept {
  switch (kind) {
    case DecisivenessCertificate::Kind::FiniteAttractor: return "finite-attractor";
    case DecisivenessCertificate::Kind::GloballyCoarse: return "globally-coarse";
    case DecisivenessCertificate::Kind::Unverified: return "unverified";
  }
  return "unverified";
}

DecisivenessCertificate DecisivenessCertificate::globally_coarse(const Rational& beta, std::size_t span,
                                                                 std::string target) {
  if (beta <= 0 || beta > 1) {
    fail(ErrorCode::InvalidArgument, "coarseness bound must lie in (0,1], got " + to_fraction(beta));
  }
  DecisivenessCertificate cert;
  cert.kind = Kind::GloballyCoarse;
  cert.citation = "coarse and finitely spanning; reach probability is 0 or at least beta^span";
  cert.beta = beta;
  cert.span = span;
  cert.alpha = pow(beta, span);
  cert.target = std::move(target);
  return cert;
}

DecisivenessCertificate DecisivenessCertificate::finite_attractor(std::string citation, std::string target) {
  DecisivenessCertificate cert;
  cert.kind = Kind::FiniteAttractor;
  cert.citation = std::move(citation);
  cert.target = std::move(target);
  return cert;
}

}  // namespace decisive
