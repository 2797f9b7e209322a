#include "braidcheck/rmatrix.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace braidcheck;

namespace {

Op from_rows(std::size_t n, const std::vector<int>& v) {
    Op m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m.set(r, c, Scalar(v[r * n + c]));
    return m;
}

// Dense oracle: apply an operator to the basis vector e_i (x) e_j.
Scalar entry(const Op& R, std::size_t N, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return R.get(k * N + l, i * N + j);
}

Matrix<Scalar> random_invertible(std::size_t N, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(-3, 3);
    for (;;) {
        Matrix<Scalar> W(N, N);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) W.set(i, j, Scalar(d(rng)));
        if (rank(W) == N) return W;
    }
}

}  // namespace

TEST(Builtin, Flip) {
    Braiding P = builtin_braiding("flip", 2);
    EXPECT_EQ(P.kind(), BraidingKind::involutive);
    EXPECT_EQ(entry(P.matrix(), 2, 0, 1, 1, 0), Scalar(1));
    EXPECT_EQ(P.bi_rank(), 2);
    EXPECT_EQ(P.c(), Op::identity(2));
    EXPECT_EQ(trace(P.c()), Scalar(2));
    EXPECT_EQ(builtin_braiding("flip", 3).bi_rank(), 3);
}

TEST(Builtin, DjHecke) {
    Braiding R = builtin_braiding("dj_hecke", 2);
    EXPECT_EQ(R.kind(), BraidingKind::hecke);
    EXPECT_TRUE(braid_residual(R.matrix(), 2).is_zero_matrix());
    EXPECT_TRUE(hecke_residual(R.matrix()).is_zero_matrix());
    const Scalar q = Scalar::q();
    // entry convention
    EXPECT_EQ(entry(R.matrix(), 2, 0, 0, 0, 0), q);
    EXPECT_EQ(entry(R.matrix(), 2, 0, 1, 1, 0), Scalar(1));
    EXPECT_EQ(entry(R.matrix(), 2, 0, 1, 0, 1), qlambda());
    EXPECT_EQ(entry(R.matrix(), 2, 1, 0, 0, 1), Scalar(1));
    EXPECT_TRUE(entry(R.matrix(), 2, 1, 0, 1, 0).is_zero());
    // C worked out by hand from Tr_2 R_12 C_2 = I_1
    EXPECT_EQ(R.c(), Op::diagonal({Scalar::power(-3), Scalar::power(-1)}));
    EXPECT_EQ(trace(R.c()), qint(2) * Scalar::power(-2));
    EXPECT_EQ(R.bi_rank(), 2);
}

TEST(Builtin, DjHeckeThree) {
    Braiding R = builtin_braiding("dj_hecke", 3);
    EXPECT_EQ(R.bi_rank(), 3);
    EXPECT_TRUE(R.symmetrizer(4).is_zero_matrix());
    EXPECT_EQ(rank(R.symmetrizer(3)), 1u);
    // A^(3) agrees with a closed chain form
    EXPECT_EQ(symmetrizer_closed_form(R, 3, ClosedForm::ascending), R.symmetrizer(3));
    Op CC = kron(R.c(), R.c());
    EXPECT_EQ(R.matrix() * CC, CC * R.matrix());
    EXPECT_EQ(trace(R.c()), qint(3) * Scalar::power(-3));
}

TEST(Builtin, ConjugatedFlip) {
    Matrix<Scalar> W = from_rows(2, {1, 1, 0, 1});
    Braiding B = builtin_braiding("conjugated_flip", 2, W);
    EXPECT_EQ(B.kind(), BraidingKind::involutive);
    EXPECT_NE(B.matrix(), flip_matrix(2));
    EXPECT_TRUE(braid_residual(B.matrix(), 2).is_zero_matrix());
    EXPECT_EQ(B.bi_rank(), 2);
    EXPECT_EQ(trace(B.c()), Scalar(2));
    EXPECT_THROW(builtin_braiding("conjugated_flip", 2, from_rows(2, {1, 1, 1, 1})), BraidingError);
}

TEST(Builtin, Errors) {
    EXPECT_THROW(builtin_braiding("nope", 2), std::invalid_argument);
    EXPECT_THROW(builtin_braiding("flip", 1), std::invalid_argument);
}

TEST(Classify, Cases) {
    EXPECT_EQ(classify(flip_matrix(2)), BraidingKind::involutive);
    EXPECT_EQ(classify(dj_hecke_matrix(2)), BraidingKind::hecke);
    Op bad = flip_matrix(2);
    bad.add_to(0, 0, Scalar(1));
    EXPECT_THROW(classify(bad), BraidingError);
}

TEST(Load, RoundTripAndErrors) {
    Braiding R = builtin_braiding("dj_hecke", 2);
    std::string text = braiding_to_json(R).dump();
    Braiding back = load_braiding(text);
    EXPECT_EQ(back.matrix(), R.matrix());
    EXPECT_EQ(back.kind(), BraidingKind::hecke);

    // lambda written out in the grammar, auto kind
    std::string file = R"({"name":"dj","dim":2,"kind":"auto","entries":[
        {"row":0,"col":0,"value":"q"},{"row":2,"col":1,"value":"1"},{"row":1,"col":1,"value":"q - 1/q"},
        {"row":1,"col":2,"value":1},{"row":3,"col":3,"value":"q"}]})";
    EXPECT_EQ(load_braiding(file).matrix(), R.matrix());

    std::string flip = R"({"name":"P","dim":2,"kind":"auto","entries":[
        {"row":0,"col":0,"value":"1"},{"row":1,"col":2,"value":"1"},{"row":2,"col":1,"value":"1"},{"row":3,"col":3,"value":"1"}]})";
    EXPECT_EQ(load_braiding(flip).kind(), BraidingKind::involutive);

    // a generic matrix violates the braid relation; the error names a witness triple
    std::string generic = R"({"name":"g","dim":2,"kind":"auto","entries":[
        {"row":0,"col":0,"value":"2"},{"row":0,"col":1,"value":"1"},{"row":1,"col":2,"value":"3"},{"row":3,"col":3,"value":"1"}]})";
    try {
        load_braiding(generic);
        FAIL();
    } catch (const BraidingError& e) {
        EXPECT_NE(std::string(e.what()).find("row ("), std::string::npos) << e.what();
    }

    EXPECT_THROW(load_braiding("{"), BraidingFileError);
    EXPECT_THROW(load_braiding(R"({"dim":2,"entries":[{"row":0,"col":0,"value":"0.5"}]})"), ParseError);
    EXPECT_THROW(load_braiding(R"({"dim":2,"entries":[{"row":9,"col":0,"value":"1"}]})"), BraidingFileError);
    EXPECT_THROW(load_braiding(R"({"dim":2,"kind":"hecke","entries":[
        {"row":0,"col":0,"value":"1"},{"row":1,"col":2,"value":"1"},{"row":2,"col":1,"value":"1"},{"row":3,"col":3,"value":"1"}]})"),
                 BraidingError);
}

TEST(Baxterize, RationalAndTrig) {
    Braiding P = builtin_braiding("flip", 2);
    EXPECT_EQ(baxterize(P, Scalar(2)), flip_matrix(2) - scale(Scalar(Rational(1, 2)), Op::identity(4)));
    EXPECT_THROW(baxterize(P, Scalar(0)), std::domain_error);

    Braiding R = builtin_braiding("dj_hecke", 2);
    // at x = q^2 the pole term is lambda q^2/(q^2-1) = q
    EXPECT_EQ(baxterize(R, Scalar::power(2)), R.matrix() - scale(Scalar::q(), Op::identity(4)));
    // q^k/k_q - R_k = -R_k(q^{2k})
    for (int k = 1; k <= 3; ++k)
        EXPECT_EQ(scale(Scalar::power(k) / qint(k), Op::identity(4)) - R.matrix(),
                  scale(Scalar(-1), baxterize(R, Scalar::power(2 * k))));
    EXPECT_THROW(baxterize(R, Scalar(1)), std::domain_error);
}

TEST(Embed, Positions) {
    Op R = dj_hecke_matrix(2);
    EXPECT_EQ(embed(R, 2, 1, 3), kron(R, Op::identity(2)));
    EXPECT_EQ(embed(R, 2, 2, 3), kron(Op::identity(2), R));
    EXPECT_THROW(embed(R, 2, 3, 3), std::out_of_range);
    Op P = flip_matrix(2);
    Op P1 = embed(P, 2, 1, 3), P2 = embed(P, 2, 2, 3);
    EXPECT_EQ(P1 * P2 * P1, P2 * P1 * P2);
}

TEST(Symmetrizers, FlipAndHecke) {
    Braiding P = builtin_braiding("flip", 2);
    EXPECT_EQ(P.symmetrizer(2), scale(Scalar(Rational(1, 2)), Op::identity(4) - flip_matrix(2)));
    Braiding R = builtin_braiding("dj_hecke", 2);
    EXPECT_TRUE(R.symmetrizer(3).is_zero_matrix());
    EXPECT_EQ(rank(R.symmetrizer(2)), 1u);
    for (std::size_t k = 1; k <= 2; ++k) EXPECT_EQ(R.symmetrizer(k) * R.symmetrizer(k), R.symmetrizer(k));
}

TEST(Birank, ConjugationInvariant) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 5; ++t) {
        Matrix<Scalar> W = random_invertible(2, rng);
        Braiding B = builtin_braiding("conjugated_flip", 2, W);
        EXPECT_EQ(B.bi_rank(), 2);
    }
    std::mt19937_64 rng3(6);
    EXPECT_EQ(builtin_braiding("conjugated_flip", 3, random_invertible(3, rng3)).bi_rank(), 3);
}

TEST(RTrace, Values) {
    Braiding R = builtin_braiding("dj_hecke", 2);
    Scalar t = qint(2) * Scalar::power(-2);
    EXPECT_EQ(r_trace_full(Op::identity(4), R.c(), 2), t * t);
    Braiding P = builtin_braiding("flip", 2);
    EXPECT_EQ(r_trace_full(Op::identity(4), P.c(), 2), Scalar(4));
    // partial trace over the last factor of R gives I (the defining property of C)
    EXPECT_EQ(r_trace(R.matrix(), R.c(), 2, 2), Op::identity(2));
    EXPECT_THROW(r_trace(Op::identity(8), R.c(), 2, std::vector<std::size_t>{1, 2}), std::invalid_argument);
    EXPECT_THROW(r_trace(Op::identity(8), R.c(), 2, std::vector<std::size_t>{}), std::invalid_argument);
    EXPECT_EQ(r_trace(Op::identity(8), R.c(), 2, std::vector<std::size_t>{2, 3}), scale(t * t, Op::identity(2)));
}

TEST(Chains, DegenerateAndInverse) {
    Braiding R = builtin_braiding("dj_hecke", 2);
    Scalar u(Rational(3, 2));
    EXPECT_EQ(chain(R, {2, 2, +1, false}, u, 3), embed(baxterize(R, u), 2, 2, 3));
    ChainSpec s{1, 2, +1, false};
    EXPECT_EQ(chain(R, s, u, 3) * inverse_chain(R, s, u, 3), Op::identity(8));
    EXPECT_THROW(chain(builtin_braiding("flip", 2), s, u, 3), std::invalid_argument);
    // first chain-commutation relation at k = 2
    EXPECT_TRUE(chain_lemma_residual(R, 1, 2, u).is_zero_matrix());
}

TEST(Compatibility, Pairs) {
    Braiding R = builtin_braiding("dj_hecke", 2);
    Braiding P = builtin_braiding("flip", 2);
    Braiding F = builtin_braiding("conjugated_flip", 2, from_rows(2, {2, 1, 1, 1}));
    EXPECT_TRUE(check_compatibility(R, R));
    EXPECT_TRUE(check_compatibility(R, P));
    EXPECT_TRUE(check_compatibility(P, P));
    EXPECT_FALSE(check_compatibility(R, F));
    EXPECT_THROW(check_compatibility(R, builtin_braiding("flip", 3)), std::invalid_argument);
}

TEST(RMatrixIdentities, Catalog) {
    for (auto [name, N] : {std::pair{"flip", 2}, std::pair{"dj_hecke", 2}, std::pair{"conjugated_flip", 2}}) {
        RMatrixOptions opt;
        opt.closed_form_kmax = 3;
        opt.chain_kmax = 2;
        opt.random_trials = 10;
        Report rep = verify_rmatrix_identities(builtin_braiding(name, static_cast<std::size_t>(N)), opt);
        EXPECT_TRUE(rep.ok()) << rep.to_json().dump(2);
    }
}

TEST(RMatrixIdentities, TrigInversionVariant) {
    RMatrixOptions opt;
    opt.selection = {"inversion"};
    Report rep = verify_rmatrix_identities(builtin_braiding("dj_hecke", 2), opt);
    const CheckRecord* c = rep.find("inversion");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->status, Status::pass);
    EXPECT_EQ(c->params["variant R(1/x)"], "holds");
    EXPECT_EQ(c->params["variant R(-1/x)"], "fails");
}

TEST(RMatrixIdentities, FailuresCarryWitness) {
    // the chain relations with the wrong argument shift must fail
    Braiding R = builtin_braiding("dj_hecke", 2);
    Scalar u(Rational(5, 3));
    Op wrong = chain(R, {1, 2, +1, false}, u, 3) * embed(R.symmetrizer(2), 2, 1, 3) -
               embed(R.symmetrizer(2), 2, 2, 3) * chain(R, {1, 2, -1, false}, u, 3);
    EXPECT_FALSE(wrong.is_zero_matrix());
    json w = residual_witness(wrong, 2);
    EXPECT_TRUE(w.contains("row"));
}
