#include "terzatic/oracle.hpp"

#include <exception>

namespace terzatic::oracle {
namespace {

using Q = Rational;

Q lit(std::string_view s) { return ExactContext::literal(s); }

std::vector<Q> lits(std::initializer_list<std::string_view> xs) {
  std::vector<Q> out;
  for (auto x : xs) out.push_back(lit(x));
  return out;
}

SimpleInstance<Q> simple(std::initializer_list<std::string_view> p, std::initializer_list<std::string_view> x) {
  return SimpleInstance<Q>(Weights<Q>::from_normalized(lits(p)), PointVector<Q>(lits(x), Q(1)));
}

FunctionModel<Q> cube() { return FunctionModel<Q>::power(3); }

Certificate<Q> poly_cert(std::initializer_list<std::string_view> coeffs) {
  return Certificate<Q>::polynomial(Polynomial<Q>{lits(coeffs)});
}

/// k = 2, q = (1/2, 1/2), both blocks p = (1/2, 1/2), x = (0, 1).
GeneralInstance<Q> two_block_instance() {
  const auto inst = simple({"1/2", "1/2"}, {"0", "1"});
  return replicate_instance(inst.p, inst.x, Weights<Q>::from_normalized(lits({"1/2", "1/2"})));
}

/// k = 1, x = (0, 1), p = (1/2, 1/2), r = (1/4, 3/4).
GeneralInstance<Q> ratio_instance() {
  return GeneralInstance<Q>::single(simple({"1/2", "1/2"}, {"0", "1"}),
                                    Weights<Q>::from_normalized(lits({"1/4", "3/4"})));
}

SimpleInstance<Q> single_block(const GeneralInstance<Q>& g) {
  if (g.k() != 1) throw ValidationError("this display needs a single-block instance (k = 1)", "instance.blocks");
  return SimpleInstance<Q>(g.block(0).p, g.block(0).x);
}

}  // namespace

ExactResult exact_evaluate(CheckId id, const ExactInputs& in) {
  const auto& f = in.certificate ? in.function.with_certificate(in.certificate) : in.function;
  const auto& g = in.instance;
  switch (id) {
    case CheckId::jensen:
      return jensen(f, single_block(g));
    case CheckId::generalized_jensen:
      return generalized_jensen(f, g, WeightFamily::p);
    case CheckId::def2:
      return check_def2(f, single_block(g));
    case CheckId::lemma5:
      return check_lemma5(f, g);
    case CheckId::thm6_lower:
      return theorem6_lower_check(f, g);
    case CheckId::thm6_upper:
      return theorem6_upper_check(f, g);
    case CheckId::threshold:
      return feasibility_threshold(f, single_block(g));
    case CheckId::ratio_extrema:
      return ratio_extrema(g);
  }
  throw std::logic_error("unknown check id");
}

std::vector<PinnedExample> pinned_examples() {
  std::vector<PinnedExample> t;
  auto add = [&](std::string name, std::string expected, std::function<Q()> fn) {
    t.push_back({std::move(name), std::move(expected), std::move(fn)});
  };

  add("make_weights (1,3) first", "1/4", [] { return make_weights(lits({"1", "3"}))[0]; });
  add("make_weights (1,3) second", "3/4", [] { return make_weights(lits({"1", "3"}))[1]; });
  add("barycenter p=(1/4,3/4) x=(0,1)", "3/4", [] { return barycenter(simple({"1/4", "3/4"}, {"0", "1"})); });
  add("general_barycenter k=2", "1/2", [] { return general_barycenter(two_block_instance(), WeightFamily::p); });
  add("terza_quotient x^3 d=0", "0", [] { return terza_quotient(cube(), Q(0), Q(1)); });
  add("terza_quotient x^3 d=1/2", "1/4", [] { return terza_quotient(cube(), lit("1/2"), Q(1)); });
  add("terza_quotient x^3 d=-1/4", "1/16", [] { return terza_quotient(cube(), lit("-1/4"), Q(1)); });
  add("jensen x^3 p=(1/2,1/2) x=(0,1)", "3/8", [] { return jensen(cube(), simple({"1/2", "1/2"}, {"0", "1"})); });
  add("jensen x^3 p=(1/4,3/4) x=(0,1)", "21/64", [] { return jensen(cube(), simple({"1/4", "3/4"}, {"0", "1"})); });
  add("tensor_distribution k=2 merged atom count", "3",
      [] { return Q(static_cast<long>(tensor_distribution(two_block_instance(), WeightFamily::p, true).atoms.size())); });
  add("tensor_distribution k=2 middle atom weight", "1/2",
      [] { return tensor_distribution(two_block_instance(), WeightFamily::p, true).atoms[1].weight; });
  add("generalized_jensen x^3 k=2", "3/16",
      [] { return generalized_jensen(cube(), two_block_instance(), WeightFamily::p); });
  add("def2_rhs x^3 x=(0,1) c=3/4", "5/16",
      [] { return def2_rhs(cube(), lit("3/4"), simple({"1/2", "1/2"}, {"0", "1"})); });
  add("def2_rhs x^3 x=(0,1) c=1", "3/8", [] { return def2_rhs(cube(), Q(1), simple({"1/2", "1/2"}, {"0", "1"})); });
  add("def2_rhs_alt x^3 x=(0,1) c=3/4", "5/16",
      [] { return def2_rhs_alt(cube(), lit("3/4"), simple({"1/2", "1/2"}, {"0", "1"})); });
  add("check_def2 slack x=(1/2,1) C=3x^2", "-3/256",
      [] { return check_def2(cube(), simple({"1/2", "1/2"}, {"1/2", "1"})).slack; });
  add("check_def2 slack x=(1/2,1) C=2x", "0", [] {
    return check_def2(cube().with_certificate(Polynomial<Q>{lits({"0", "2"})}), simple({"1/2", "1/2"}, {"1/2", "1"}))
        .slack;
  });
  add("lemma5_rhs x^3 k=2 c=1", "3/16", [] { return lemma5_rhs(cube(), Q(1), two_block_instance()); });
  add("check_lemma5 slack k=2 c=1/2", "1/16", [] {
    return check_lemma5(cube(), two_block_instance(), Direction::super, std::optional<Q>(lit("1/2"))).slack;
  });
  add("feasibility_threshold x^3 x=(1/2,1)", "3/2",
      [] { return *feasibility_threshold(cube(), simple({"1/2", "1/2"}, {"1/2", "1"})).value; });
  add("feasibility_threshold x^3 x=(0,1)", "1",
      [] { return *feasibility_threshold(cube(), simple({"1/2", "1/2"}, {"0", "1"})).value; });
  add("estimate_certificate x^3 x_bar=1/2", "1",
      [] { return estimate_certificate(cube(), lit("1/2"), SizeRange{2, 5}, 64, 7).c_sup_estimate; });
  add("estimate_certificate x^3 x_bar=3/4", "3/2",
      [] { return estimate_certificate(cube(), lit("3/4"), SizeRange{2, 5}, 64, 7).c_sup_estimate; });
  add("ratio_extrema m k=2 (0.3,0.7)/(0.5,0.5)", "9/25", [] {
    const auto p = Weights<Q>::from_normalized(lits({"0.3", "0.7"}));
    const auto r = Weights<Q>::from_normalized(lits({"0.5", "0.5"}));
    const auto q = Weights<Q>::from_normalized(lits({"1/2", "1/2"}));
    return ratio_extrema(replicate_instance(p, PointVector<Q>(lits({"0", "1"}), Q(1)), q, r)).m;
  });
  add("ratio_extrema M k=2 (0.3,0.7)/(0.5,0.5)", "49/25", [] {
    const auto p = Weights<Q>::from_normalized(lits({"0.3", "0.7"}));
    const auto r = Weights<Q>::from_normalized(lits({"0.5", "0.5"}));
    const auto q = Weights<Q>::from_normalized(lits({"1/2", "1/2"}));
    return ratio_extrema(replicate_instance(p, PointVector<Q>(lits({"0", "1"}), Q(1)), q, r)).M;
  });
  add("ratio_extrema m k=1 p=(1/2,1/2) r=(1/4,3/4)", "2/3", [] { return ratio_extrema(ratio_instance()).m; });
  add("ratio_extrema M k=1 p=(1/2,1/2) r=(1/4,3/4)", "2", [] { return ratio_extrema(ratio_instance()).M; });
  add("replicate k=2 m", "4/9", [] {
    const auto g = ratio_instance();
    return ratio_extrema(replicate_instance(g.block(0).p, g.block(0).x, Weights<Q>::from_normalized(lits({"1/2", "1/2"})),
                                            (*g.r_blocks())[0]))
        .m;
  });
  add("replicate k=2 M", "4", [] {
    const auto g = ratio_instance();
    return ratio_extrema(replicate_instance(g.block(0).p, g.block(0).x, Weights<Q>::from_normalized(lits({"1/2", "1/2"})),
                                            (*g.r_blocks())[0]))
        .M;
  });
  add("theorem6 lower lhs C=3x^2", "5/32", [] { return theorem6_lower_check(cube(), ratio_instance()).lhs; });
  add("theorem6 lower rhs C=3x^2", "1/8", [] { return theorem6_lower_check(cube(), ratio_instance()).rhs; });
  add("theorem6 lower slack C=3x^2", "1/32", [] { return theorem6_lower_check(cube(), ratio_instance()).slack; });
  add("theorem6 lower slack C=2x", "0",
      [] { return theorem6_lower_check(cube(), ratio_instance(), poly_cert({"0", "2"})).slack; });
  add("theorem6 upper lhs C=2x", "9/32",
      [] { return theorem6_upper_check(cube(), ratio_instance(), poly_cert({"0", "2"})).lhs; });
  add("theorem6 upper slack C=2x", "0",
      [] { return theorem6_upper_check(cube(), ratio_instance(), poly_cert({"0", "2"})).slack; });
  add("theorem6 upper rhs C=3x^2", "39/128", [] { return theorem6_upper_check(cube(), ratio_instance()).rhs; });
  add("theorem6 upper slack C=3x^2", "-3/128", [] { return theorem6_upper_check(cube(), ratio_instance()).slack; });
  add("corollary8 lower slack C=3x^2", "1/32", [] {
    const auto g = ratio_instance();
    return corollary8_check(cube(), g.block(0).x, g.block(0).p, (*g.r_blocks())[0], Side::lower,
                            poly_cert({"0", "0", "3"}))
        .slack;
  });
  add("corollary8 upper slack C=2x", "0", [] {
    const auto g = ratio_instance();
    return corollary8_check(cube(), g.block(0).x, g.block(0).p, (*g.r_blocks())[0], Side::upper, poly_cert({"0", "2"}))
        .slack;
  });
  add("corollary8 upper slack C=3x^2", "-3/128", [] {
    const auto g = ratio_instance();
    return corollary8_check(cube(), g.block(0).x, g.block(0).p, (*g.r_blocks())[0], Side::upper,
                            poly_cert({"0", "0", "3"}))
        .slack;
  });
  return t;
}

SelftestResult run_selftest(const std::vector<PinnedExample>& table) {
  SelftestResult result;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& row : table) {
    try {
      const Q got = row.compute();
      const Q want = parse_rational(row.expected);
      if (got == want) {
        ++result.passed;
      } else {
        result.failures.push_back(row.name + ": expected " + format_rational(want) + ", got " + format_rational(got));
      }
    } catch (const std::exception& e) {
      result.failures.push_back(row.name + ": threw " + e.what());
    }
  }
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace terzatic::oracle
