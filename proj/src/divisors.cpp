#include "moduli/divisors.hpp"

#include <algorithm>
#include <set>

#include "moduli/error.hpp"
#include "moduli/morphisms.hpp"

namespace moduli {

namespace {

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

ForgetClassification classify_under_forgetting(const BoundaryDivisor& divisor,
                                               const std::vector<int>& keep) {
  const Space& s = divisor.space;
  std::size_t want = s.kind == SpaceKind::MULT ? 2 : s.kind == SpaceKind::M0 ? 4 : 0;
  if (want == 0) throw Error(ErrorCode::KindMismatch, "forgetful classification needs MULT or M0");
  if (keep.size() != want) {
    throw Error(ErrorCode::InvalidGraph, "keep " + std::to_string(want) + " markings");
  }
  MarkedGraph g = divisor.generic_type;
  auto labels = g.leg_labels();
  std::sort(labels.rbegin(), labels.rend());
  for (int l : labels) {
    if (l == 0 || contains(keep, l)) continue;
    g = forget_tail(g, l);
  }
  ForgetClassification out;
  out.image = compact_labels(g);
  Space target{s.kind, static_cast<int>(want)};
  int codim = stratum_codimension(out.image, target);
  if (codim == 0) {
    out.dominant = true;
    return out;
  }
  std::string key = canonical_key(out.image);
  for (auto& d : boundary_divisors(target)) {
    if (canonical_key(d.generic_type) == key) {
      out.target = d;
      out.multiplicity = 1;
      return out;
    }
  }
  throw Error(ErrorCode::InvalidGraph, "image of " + divisor.name() + " has codimension " +
                                           std::to_string(codim));
}

PullbackReport verify_multiplihedron_pullback(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidGraph, "pullback relation needs n >= 2");
  check_space({SpaceKind::MULT, n}, 6);
  PullbackReport rep;
  rep.n = n;
  std::vector<std::string> expected_lhs, expected_rhs;
  rep.multiplicities_one = true;
  for (const auto& d : boundary_divisors({SpaceKind::MULT, n})) {
    if (d.shape == DivisorShape::Partition) {
      bool separated = std::none_of(d.blocks.begin(), d.blocks.end(), [](const auto& b) {
        return contains(b, 1) && contains(b, 2);
      });
      if (separated) expected_lhs.push_back(d.name());
    } else if (contains(d.subset, 1) && contains(d.subset, 2)) {
      expected_rhs.push_back(d.name());
    }
    auto c = classify_under_forgetting(d, {1, 2});
    if (c.dominant) {
      rep.dominant.push_back(d.name());
      continue;
    }
    if (c.multiplicity != 1) rep.multiplicities_one = false;
    if (c.target->shape == DivisorShape::Partition) rep.lhs.push_back(d.name());
    else rep.rhs.push_back(d.name());
  }
  rep.lhs_matches = rep.lhs == expected_lhs;
  rep.rhs_matches = rep.rhs == expected_rhs;
  return rep;
}

M04Report verify_m04_pullback(int n, const std::string& split) {
  if (n < 4) throw Error(ErrorCode::InvalidGraph, "M0 pullback needs n >= 4");
  check_space({SpaceKind::M0, n}, 7);
  std::vector<int> side;
  if (split == "12|34") side = {1, 2};
  else if (split == "13|24") side = {1, 3};
  else if (split == "14|23") side = {2, 3};  // side without 4
  else throw Error(ErrorCode::ParseError, "split must be 12|34, 13|24 or 14|23");
  std::vector<int> other;
  for (int l : {1, 2, 3}) {
    if (!contains(side, l)) other.push_back(l);
  }
  other.push_back(4);

  M04Report rep;
  rep.n = n;
  rep.split = split;
  auto name = [n](const std::vector<int>& subset) {
    // Name by the side that does not contain 4.
    std::vector<int> named = subset;
    if (contains(subset, 4)) {
      named.clear();
      for (int l = 1; l <= n; ++l) {
        if (!contains(subset, l)) named.push_back(l);
      }
    }
    std::string out = "D{";
    for (std::size_t i = 0; i < named.size(); ++i) out += (i ? "," : "") + std::to_string(named[i]);
    return out + "}";
  };
  auto divisors = boundary_divisors({SpaceKind::M0, n});
  rep.total_divisors = static_cast<int>(divisors.size());
  for (const auto& d : divisors) {
    auto on_side = [&](const std::vector<int>& labels) {
      return std::all_of(labels.begin(), labels.end(), [&](int l) { return contains(d.subset, l); });
    };
    auto off_side = [&](const std::vector<int>& labels) {
      return std::none_of(labels.begin(), labels.end(), [&](int l) { return contains(d.subset, l); });
    };
    if ((on_side(side) && off_side(other)) || (on_side(other) && off_side(side))) {
      rep.expected.push_back(name(d.subset));
    }
    auto c = classify_under_forgetting(d, {1, 2, 3, 4});
    if (!c.dominant && c.target->subset == side) rep.preimage.push_back(name(d.subset));
  }
  std::sort(rep.expected.begin(), rep.expected.end());
  std::sort(rep.preimage.begin(), rep.preimage.end());
  return rep;
}

bool RhoReport::ok() const {
  if (rhs.size() != bell) return false;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    if (dimensions[i] != slice_dimension || codimensions[i] != 1) return false;
  }
  return true;
}

RhoReport rho_divisor_enumeration(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidGraph, "rho relation needs n >= 1");
  Space s{SpaceKind::SCALED, n};
  check_space(s, 6);
  RhoReport rep;
  rep.n = n;
  rep.bell = bell_number(n);
  rep.slice_dimension = ambient_dimension({SpaceKind::FM, n});
  for (const auto& d : boundary_divisors(s)) {
    if (d.shape != DivisorShape::Partition) continue;
    rep.rhs.push_back(d.name());
    rep.dimensions.push_back(stratum_dimension(d.generic_type, s));
    rep.codimensions.push_back(divisor_codimension(d));
  }
  return rep;
}

}  // namespace moduli
