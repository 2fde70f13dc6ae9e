#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace kf;
using kft::mat;

namespace {

struct Re1 {
  Frame F = kft::re1();
  JFrameOperatorBundle b = jframe_operator(F);
  BlockRepCork c = block_rep_cork(b);
  BlockRepEdinburgh e = block_rep_edinburgh(b);
  JFrameBounds bounds = jframe_bounds(c, e, F);
};

SpectrumData single(cplx z) {
  SpectrumData s;
  s.eigenvalues = {z};
  s.raw = {z};
  s.is_real = {std::abs(z.imag()) <= 1e-9 * (1 + std::abs(z))};
  s.real_part_min = z.real();
  return s;
}

}  // namespace

TEST_CASE("spectrum") {
  const Re1 r;
  const SpectrumData s = spectrum(r.b.S, {}, &r.F.space().J());
  REQUIRE(s.eigenvalues.size() == 2);
  for (cplx z : s.eigenvalues) CHECK(std::abs(z - 2.0) <= 1e-12);
  CHECK(s.is_real[0]);
  CHECK(s.conjugate_symmetric.value());
  const SpectrumData i = spectrum(Mat::Identity(3, 3));
  for (cplx z : i.eigenvalues) CHECK(std::abs(z - 1.0) <= 1e-15);
  CHECK_FALSE(i.conjugate_symmetric.has_value());
  const SpectrumData d = spectrum(mat({{1.0, 0.0}, {0.0, 3.0}}));
  CHECK(std::abs(d.eigenvalues[0] - 1.0) <= 1e-15);
  CHECK(std::abs(d.eigenvalues[1] - 3.0) <= 1e-15);
  CHECK(d.real_part_min == 1.0);
}

TEST_CASE("second Schur complement") {
  const Re1 r;
  CHECK_MAT(schur_complement_2(r.c, 0.0), mat({{3.0}}), 1e-14);
  CHECK_MAT(schur_complement_2(r.c, 2.0), mat({{0.0}}), 1e-14);
  CHECK_THROWS_AS(schur_complement_2(r.c, 4.0 / 3.0), Error);
  const BlockRepCork i = block_rep_cork(jframe_operator(kft::canonical(2, 2)));
  CHECK_MAT(schur_complement_2(i, cplx(0.5, 1.0)), i.D - cplx(0.5, 1.0) * Mat::Identity(2, 2), 1e-14);
}

TEST_CASE("first Schur complement") {
  const Re1 r;
  CHECK_MAT(schur_complement_1(r.e, 2.0), mat({{0.0}}), 1e-14);
  CHECK_MAT(schur_complement_1(r.e, 0.0), mat({{1.0}}), 1e-14);
  CHECK_THROWS_AS(schur_complement_1(r.e, 4.0), Error);
  const BlockRepEdinburgh i = block_rep_edinburgh(jframe_operator(kft::canonical(2, 1)));
  CHECK_MAT(schur_complement_1(i, cplx(3.0, -1.0)), i.Aprime - cplx(3.0, -1.0) * Mat::Identity(2, 2), 1e-14);
}

TEST_CASE("Cork enclosure") {
  const Re1 r;
  const EnclosureRegion g = enclosure_cork(r.c);
  CHECK(g.source == EnclosureSource::Cork);
  REQUIRE(g.real_interval);
  CHECK(std::abs(g.real_interval->first - 4.0 / 3.0) <= 1e-14);
  CHECK(std::abs(g.real_interval->second - 8.0 / 3.0) <= 1e-14);
  REQUIRE(g.disks.size() == 1);
  CHECK(std::abs(g.disks[0].center - 4.0 / 3.0) <= 1e-14);
  CHECK(g.disks[0].open);
  CHECK(std::abs(*g.halfplane_re_gt - 1.5) <= 1e-14);
  CHECK(std::abs(*g.imag_abs_max - 2.0 / 3.0) <= 1e-14);
  CHECK(std::abs(g.parameters.at("b_minus") - 3.0) <= 1e-14);
  CHECK(check_membership(spectrum(r.b.S), g).all_contained);

  const EnclosureRegion one = enclosure_cork(block_rep_cork(jframe_operator(kft::canonical(1, 1))));
  CHECK(std::abs(one.real_interval->first - 1.0) <= 1e-14);
  CHECK(std::abs(one.real_interval->second - 1.0) <= 1e-14);
  CHECK(std::abs(one.disks[0].center - 1.0) <= 1e-14);
  CHECK(std::abs(one.disks[0].radius - 1.0) <= 1e-14);
  CHECK(*one.imag_abs_max <= 1e-14);
}

TEST_CASE("Edinburgh enclosure and intersection with Cork") {
  const Re1 r;
  const EnclosureRegion g = enclosure_edinburgh(r.e);
  CHECK(std::abs(g.real_interval->first - 1.0) <= 1e-14);
  CHECK(std::abs(g.real_interval->second - 4.0) <= 1e-14);
  CHECK(check_membership(spectrum(r.b.S), g).all_contained);
  const auto both = intersect(*enclosure_cork(r.c).real_interval, *g.real_interval);
  REQUIRE(both);
  CHECK(std::abs(both->first - 4.0 / 3.0) <= 1e-14);
  CHECK(std::abs(both->second - 8.0 / 3.0) <= 1e-14);
  CHECK_FALSE(intersect({0.0, 1.0}, {2.0, 3.0}).has_value());

  const EnclosureRegion one = enclosure_edinburgh(block_rep_edinburgh(jframe_operator(kft::canonical(2, 1))));
  CHECK(std::abs(one.real_interval->first - 1.0) <= 1e-14);
  CHECK(std::abs(one.real_interval->second - 1.0) <= 1e-14);
}

TEST_CASE("enclosure from the J-frame bounds") {
  const Re1 r;
  const EnclosureRegion g = enclosure_from_bounds(r.bounds);
  CHECK(std::abs(g.parameters.at("eps_minus") - 4.0 / 3.0) <= 1e-13);
  CHECK(std::abs(g.parameters.at("eps_plus") - 3.0) <= 1e-13);
  CHECK(std::abs(g.parameters.at("alpha") - 3.0) <= 1e-13);
  CHECK(std::abs(g.parameters.at("gamma") - 0.75) <= 1e-13);
  CHECK(std::abs(g.disks.at(0).center - 4.0 / 3.0) <= 1e-13);
  CHECK(std::abs(*g.halfplane_re_gt - 1.5) <= 1e-13);
  CHECK(check_membership(spectrum(r.b.S), g).all_contained);

  JFrameBounds ones;
  ones.alpha_plus = ones.beta_plus = ones.alpha_minus = ones.beta_minus = 1.0;
  ones.gamma_plus = ones.delta_plus = ones.gamma_minus = ones.delta_minus = 1.0;
  const EnclosureRegion u = enclosure_from_bounds(ones);
  CHECK(u.real_interval->first == 1.0);
  CHECK(u.real_interval->second == 1.0);
  CHECK(u.disks.at(0).center == 1.0);
  CHECK(u.disks.at(0).radius == 1.0);
  CHECK(*u.halfplane_re_gt == 0.5);
}

TEST_CASE("membership verdicts") {
  EnclosureRegion unit;
  unit.real_interval = std::pair{1.0, 1.0};
  const MembershipReport at = check_membership(single(1.0), unit);
  CHECK(at.all_contained);
  CHECK(at.verdicts[0] != Membership::Outside);

  EnclosureRegion wide;
  wide.real_interval = std::pair{4.0 / 3.0, 3.0};
  const MembershipReport out = check_membership(single(0.5), wide);
  CHECK_FALSE(out.all_contained);
  CHECK(out.verdicts[0] == Membership::Outside);

  EnclosureRegion lens;
  lens.disks.push_back({1.0, 1.0, true});
  lens.halfplane_re_gt = 0.5;
  CHECK(check_membership(single({1.0, 0.5}), lens).verdicts[0] == Membership::Inside);
  CHECK(check_membership(single({1.0, 1.0}), lens).verdicts[0] == Membership::BoundaryContact);
  CHECK(check_membership(single({0.4, 0.1}), lens).verdicts[0] == Membership::Outside);
  CHECK(to_string(Membership::BoundaryContact) == "boundary-contact");
}

TEST_CASE("enclosures with zero angular operator force real spectrum") {
  GenConfig cfg;
  cfg.p = 3;
  cfg.q = 2;
  cfg.n_plus = 4;
  cfg.n_minus = 3;
  cfg.angular_norm_cap = 0.0;
  cfg.conditioning_cap = 5.0;
  const Frame F = random_jframe(cfg);
  const JFrameOperatorBundle b = jframe_operator(F);
  const BlockRepCork c = block_rep_cork(b);
  CHECK(*enclosure_cork(c).imag_abs_max <= 1e-12);
  for (cplx z : spectrum(b.S).eigenvalues) {
    CHECK(z.real() > 0.0);
    CHECK(std::abs(z.imag()) <= 1e-9);
  }
}

TEST_CASE("spectral properties of generated J-frame operators") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto [p, q] : {std::pair{1, 1}, {2, 1}, {3, 2}, {4, 4}}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      GenConfig cfg;
      cfg.p = p;
      cfg.q = q;
      cfg.n_plus = 2 * p;
      cfg.n_minus = q + 1;
      cfg.angular_norm_cap = 0.9;
      cfg.conditioning_cap = 10.0;
      cfg.seed = seed;
      const Frame F = random_jframe(cfg);
      const JFrameOperatorBundle b = jframe_operator(F);
      const BlockRepCork c = block_rep_cork(b);
      const BlockRepEdinburgh e = block_rep_edinburgh(b);
      const SpectrumData s = spectrum(b.S, {}, &F.space().J());
      CHECK(s.real_part_min > 0.0);
      CHECK(s.conjugate_symmetric.value());
      for (const EnclosureRegion& g : {enclosure_cork(c), enclosure_edinburgh(e), enclosure_imag_bound(c, e),
                                       enclosure_from_bounds(jframe_bounds(c, e, F))})
        CHECK(check_membership(s, g).all_contained);

      const double scale = linalg::norm2(b.S);
      for (cplx z : s.eigenvalues) {
        CHECK(relative_singularity(schur_complement_2(c, z), scale + std::abs(z)) <= 1e-8);
        CHECK(relative_singularity(schur_complement_1(e, z), scale + std::abs(z)) <= 1e-8);
      }
      for (int t = 0; t < 20; ++t) {
        const cplx z(2.0 * scale * u(rng), 2.0 * scale * u(rng));
        double gap = 1e300;
        for (cplx l : s.eigenvalues) gap = std::min(gap, std::abs(z - l));
        if (gap <= 1e-6) continue;
        const double w = relative_singularity(schur_complement_2(c, z), scale + std::abs(z));
        CHECK(w > 1e-8);
      }
    }
  }
}
