#include <gtest/gtest.h>

#include <algorithm>

#include "ppsz/ppsz.hpp"

using namespace ppsz;

TEST(RandomWalk, Examples) {
  Rng rng(1);
  EXPECT_TRUE(random_walk_vector(10, 0, rng).none());
  EXPECT_EQ(random_walk_vector(10, 1, rng).weight(), 1u);
  for (std::size_t steps = 0; steps < 40; ++steps)
    EXPECT_EQ(random_walk_vector(7, steps, rng).weight() % 2, steps % 2);
}

TEST(SampleMatrix, Examples) {
  const auto p = sample_matrix(12, 0, 5);
  EXPECT_EQ(f2_rank(p), 12u);
  for (const auto& r : p.rows()) EXPECT_EQ(r.weight(), 1u);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = sample_matrix(20, 4, seed);
    for (const auto& r : a.rows()) EXPECT_LE(r.weight(), 5u);
  }
  EXPECT_EQ(sample_matrix(30, 5, 9), sample_matrix(30, 5, 9));
  EXPECT_THROW(sample_matrix(0, 1, 1), PreconditionError);
}

TEST(LinearCnf, Examples) {
  const auto f = linear_cnf(F2Matrix::from_supports(3, {{0, 1}}));
  ASSERT_EQ(f.num_clauses(), 2u);
  EXPECT_NE(std::find(f.clauses().begin(), f.clauses().end(), Clause{1, -2}), f.clauses().end());
  EXPECT_NE(std::find(f.clauses().begin(), f.clauses().end(), Clause{-1, 2}), f.clauses().end());

  const auto u = linear_cnf(F2Matrix::from_supports(3, {{2}}));
  ASSERT_EQ(u.num_clauses(), 1u);
  EXPECT_EQ(u.clauses()[0], Clause{-3});

  const auto m = linear_cnf(F2Matrix::from_supports(6, {{0, 1, 2, 3}, {2, 3, 4, 5}, {0, 1, 4, 5}}));
  EXPECT_EQ(m.num_clauses(), 8u * 3u);

  std::size_t skipped = 0;
  linear_cnf(F2Matrix::from_supports(3, {{}, {1}}), &skipped);
  EXPECT_EQ(skipped, 1u);
}

TEST(LinearCnf, SolutionsAreTheKernel) {
  Rng rng(7);
  for (int iter = 0; iter < 30; ++iter) {
    const std::size_t n = 2 + rng.uniform(10);
    const auto a = sample_matrix(n, rng.uniform(4), rng.next());
    const auto f = linear_cnf(a);
    std::size_t count = 0;
    for (const auto& s : satisfying_assignments(f)) {
      BitVector x(n);
      for (Var v = 1; v <= n; ++v)
        if (s[v]) x.set(v - 1);
      EXPECT_TRUE(a.multiply(x).none());
      ++count;
    }
    EXPECT_EQ(count, std::size_t{1} << kernel_size_log2(a));
  }
}

TEST(GenerateLinear, Examples) {
  const auto inst = generate_linear_instance(10, 4, 1);
  EXPECT_TRUE(inst.unique_verified);
  EXPECT_TRUE(uniquely_satisfied_by_zero(inst.formula));
  EXPECT_EQ(inst.appended.size(), 10 - inst.rank);

  const auto k0 = generate_linear_instance(8, 0, 3);
  EXPECT_TRUE(k0.appended.empty());
  EXPECT_EQ(k0.formula.num_clauses(), 8u);
  for (const auto& c : k0.formula.clauses()) {
    ASSERT_EQ(c.width(), 1u);
    EXPECT_TRUE(c[0].negated);
  }
}

TEST(GenerateLinear, AppendedCountAlwaysRankDeficit) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = generate_linear_instance(16, 3, seed);
    EXPECT_EQ(inst.appended.size(), 16 - inst.rank);
    EXPECT_EQ(f2_rank(inst.matrix), 16u);
  }
}

TEST(GenerateLinear, DimacsCarriesRows) {
  const auto inst = generate_linear_instance(12, 4, 1);
  const auto file = parse_dimacs_file(inst.to_dimacs());
  EXPECT_EQ(file.formula, inst.formula);
  const auto meta = parse_metadata(file.comments);
  EXPECT_EQ(meta.get("rank"), std::to_string(inst.rank));
  EXPECT_EQ(matrix_from_metadata(meta, 12), inst.matrix);
}

TEST(WellIncreasing, Examples) {
  const std::size_t n = 8, k = 4;  // bounds [2, 8]
  const auto u1 = BitVector::from_support(n, {0, 1, 2});
  EXPECT_TRUE(well_increasing_check({u1}, n, k));
  EXPECT_FALSE(well_increasing_check({u1, BitVector::from_support(n, {0, 1})}, n, k));
  EXPECT_TRUE(well_increasing_check({u1, BitVector::from_support(n, {0, 4, 5})}, n, k));
  EXPECT_FALSE(well_increasing_check({BitVector::from_support(12, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11})}, 12, 6));
}

TEST(ExpanderParams, Resolution) {
  const auto p = ExpanderParams::from(1000, 16);
  EXPECT_EQ(p.t, 1000u);  // 15000 clamps to n
  EXPECT_EQ(p.w, 125u);
  EXPECT_EQ(p.ell, 4u);
  const auto q = ExpanderParams::from(100000, 1024);
  EXPECT_EQ(q.t, 58594u);
  EXPECT_EQ(q.ell, 150u);
  EXPECT_EQ(q.w, 195u);
}

TEST(ExpansionSearch, IdentityAgainstWidthBound) {
  const std::size_t n = 8, k = 4;
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  // w >= 4n/k: |u A_U| = |u & U| <= |u| <= w, so any single u is short
  const auto wide = expansion_search(F2Matrix::identity(n), {0, 1, 2, 3}, {4, 1, 8}, k, SearchMode::Exhaustive,
                                     1'000'000);
  EXPECT_EQ(wide.status, ExpansionStatus::Violation);
  // w below the minimum fresh weight with U = everything: nothing is short
  const auto strict = expansion_search(F2Matrix::identity(n), all, {8, 1, 1}, k, SearchMode::Exhaustive, 1'000'000);
  EXPECT_EQ(strict.status, ExpansionStatus::NoneFound);
}

TEST(ExpansionSearch, ZeroMatrixAlwaysViolates) {
  const std::size_t n = 8, k = 4;
  ExpanderParams p{4, 2, 1};
  const auto r = expansion_search(F2Matrix(n, n), {0, 1, 2, 3}, p, k, SearchMode::Exhaustive, 1'000'000);
  ASSERT_EQ(r.status, ExpansionStatus::Violation);
  EXPECT_TRUE(well_increasing_check(r.sequence, n, k));
  const auto s = expansion_search(F2Matrix(n, n), {0, 1, 2, 3}, p, k, SearchMode::Randomized, 100, 5);
  EXPECT_EQ(s.status, ExpansionStatus::Violation);
}

TEST(ExpansionSearch, ExhaustiveAndRandomizedAgree) {
  const std::size_t n = 8, k = 4;
  int violations = 0, clean = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = sample_matrix(n, k, seed);
    for (std::size_t w : {0u, 1u, 2u}) {
      ExpanderParams p{4, 1, w};
      const std::vector<std::size_t> cols{0, 1, 2, 3, 4, 5, 6, 7};
      const auto ex = expansion_search(a, cols, p, k, SearchMode::Exhaustive, 10'000'000);
      const auto rnd = expansion_search(a, cols, p, k, SearchMode::Randomized, 200'000, seed);
      ASSERT_NE(ex.status, ExpansionStatus::BudgetExceeded);
      EXPECT_EQ(ex.status == ExpansionStatus::Violation, rnd.status == ExpansionStatus::Violation);
      if (rnd.status == ExpansionStatus::Violation) {
        EXPECT_TRUE(well_increasing_check(rnd.sequence, n, k));
        for (const auto& u : rnd.sequence) {
          BitVector mask = BitVector::from_support(n, cols);
          EXPECT_LE(a.combine(u).and_weight(mask), w);
        }
      }
      (ex.status == ExpansionStatus::Violation ? violations : clean)++;
    }
  }
  EXPECT_GT(violations, 0);
  EXPECT_GT(clean, 0);
}

TEST(ExpansionSearch, BudgetAndGuard) {
  ExpanderParams p{4, 2, 0};
  const auto r = expansion_search(sample_matrix(10, 3, 1), {0, 1, 2}, p, 3, SearchMode::Exhaustive, 5);
  EXPECT_EQ(r.status, ExpansionStatus::BudgetExceeded);
  EXPECT_THROW(expansion_search(sample_matrix(13, 3, 1), {0}, p, 3, SearchMode::Exhaustive, 5), GuardError);
  std::vector<std::size_t> all(10);
  for (std::size_t i = 0; i < 10; ++i) all[i] = i;
  const auto s = expansion_search(F2Matrix::identity(10), all, {3, 1, 0}, 3, SearchMode::Randomized, 50, 1);
  EXPECT_EQ(s.status, ExpansionStatus::NoneFoundSampled);
}

TEST(KernelExperiment, Examples) {
  const auto s = kernel_experiment(24, 5, 200, 11, 4);
  EXPECT_GE(s.fraction_small, 0.9);
  const auto p = kernel_experiment(16, 0, 20, 1);
  EXPECT_EQ(p.mean_kernel, 1.0);
  EXPECT_EQ(p.max_kernel_log2, 0u);
  const auto one = kernel_experiment(10, 3, 1, 2);
  EXPECT_EQ(one.trials, 1u);
  EXPECT_EQ(one.median_kernel, one.mean_kernel);
}

TEST(KernelExperiment, IndependentOfWorkers) {
  const auto a = kernel_experiment(20, 4, 64, 3, 1);
  const auto b = kernel_experiment(20, 4, 64, 3, 5);
  EXPECT_EQ(a.mean_kernel, b.mean_kernel);
  EXPECT_EQ(a.mean_rank, b.mean_rank);
}

TEST(Mixing, TwoStepsOnTwoCoordinates) {
  const auto exact = exact_projected_distribution(2, 2, 2);
  EXPECT_DOUBLE_EQ(exact[0], 0.5);
  EXPECT_DOUBLE_EQ(exact[3], 0.5);
  EXPECT_DOUBLE_EQ(mixing_bound(2, 2, 2), 0.5);
  const auto r = mixing_experiment(2, 2, {0, 1}, 100'000, 3);
  EXPECT_NEAR(r.empirical_max, 0.5, 0.01);
  EXPECT_DOUBLE_EQ(r.exact_max, 0.5);
}

TEST(Mixing, ZeroStepsIsPointMass) {
  const auto r = mixing_experiment(10, 0, {1, 4, 7}, 1000, 1);
  EXPECT_EQ(r.empirical_max, 1.0);
  EXPECT_GE(r.bound, 1.0);
}

TEST(Mixing, ExactLawNeverExceedsBound) {
  for (std::size_t n : {4u, 8u, 16u})
    for (std::size_t d = 0; d <= 2 * n; ++d)
      for (std::size_t u = 1; u <= std::min<std::size_t>(n, 8); ++u) {
        const auto p = exact_projected_distribution(n, d, u);
        EXPECT_LE(*std::max_element(p.begin(), p.end()), mixing_bound(n, d, u) + 1e-12);
      }
}

TEST(Mixing, IndependentOfWorkers) {
  const auto a = mixing_experiment(16, 16, {0, 1, 2, 3, 4, 5, 6, 7}, 20'000, 8, 1);
  const auto b = mixing_experiment(16, 16, {0, 1, 2, 3, 4, 5, 6, 7}, 20'000, 8, 6);
  EXPECT_EQ(a.empirical_max, b.empirical_max);
}

TEST(RowVector, WeakInferenceHasShortRowCombination) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_linear_instance(8, 3, seed);
    for (std::size_t w = 1; w <= 3; ++w) {
      Prover prover(inst.formula, HeuristicSpec::weak(w));
      for (Var x = 1; x <= 8; ++x) {
        if (prover.infer(Restriction(8), x) == Inference::Unknown) continue;
        const auto r = row_combination_for_unit(inst.matrix, x - 1, w);
        ASSERT_TRUE(r.has_value()) << "seed " << seed << " w " << w << " x" << x;
        EXPECT_LE(r->weight(), w);
        EXPECT_EQ(inst.matrix.combine(*r), BitVector::unit(8, x - 1));
      }
    }
  }
}
