#include <doctest.h>

#include "blockcert/partition.hpp"
#include "oracles.hpp"

using namespace blockcert;

TEST_CASE("partition bookkeeping") {
    Partition p({2, 3});
    CHECK(p.count() == 2);
    CHECK(p.total() == 5);
    CHECK(p.offset(0) == 0);
    CHECK(p.offset(1) == 2);
    CHECK_THROWS_AS(Partition({2, 0}), std::invalid_argument);
    CHECK(Partition::trivial(4).count() == 4);
    CHECK(Partition{}.total() == 0);
}

TEST_CASE("validate accepts a consistent {2,3} system") {
    PartitionedSystem sys;
    sys.A = Matrix::Identity(5, 5) * -1.0;
    sys.B = Matrix::Zero(5, 1);
    sys.C = Matrix::Zero(1, 5);
    sys.D = Matrix::Zero(1, 1);
    sys.state_partition = Partition({2, 3});
    sys.input_partition = Partition({1});
    sys.output_partition = Partition({1});
    ValidationReport rep = validate(sys);
    CHECK(rep.dimensions_ok);
    CHECK(rep.all_diagonal_blocks_hurwitz);
    REQUIRE(rep.block_abscissas.size() == 2);
    CHECK(rep.block_abscissas[0] == doctest::Approx(-1.0));
}

TEST_CASE("validate flags dimension mismatch and non-Hurwitz blocks") {
    PartitionedSystem sys;
    sys.A = Matrix::Identity(5, 5) * -1.0;
    sys.B = Matrix::Zero(5, 1);
    sys.C = Matrix::Zero(1, 5);
    sys.D = Matrix::Zero(1, 1);
    sys.state_partition = Partition({2, 2});  // totals 4 != 5
    sys.input_partition = Partition({1});
    sys.output_partition = Partition({1});
    CHECK_FALSE(validate(sys).dimensions_ok);

    sys.state_partition = Partition({2, 2, 1});
    sys.A(4, 4) = 0.0;  // marginal third block
    ValidationReport rep = validate(sys);
    CHECK(rep.dimensions_ok);
    CHECK_FALSE(rep.all_diagonal_blocks_hurwitz);
    REQUIRE(rep.non_hurwitz_blocks.size() == 1);
    CHECK(rep.non_hurwitz_blocks[0] == 2);
    CHECK(rep.message.find("block 3") != std::string::npos);
}

TEST_CASE("extract_block on the identity") {
    Matrix I5 = Matrix::Identity(5, 5);
    Partition p({2, 3});
    CHECK(extract_block(I5, p, p, 0, 0).isApprox(Matrix::Identity(2, 2)));
    CHECK(extract_block(I5, p, p, 0, 1).isZero(0.0));
    CHECK_THROWS_AS(extract_block(I5, p, p, 0, 2), std::out_of_range);
}

TEST_CASE("blocks reassemble the original matrix exactly") {
    oracles::Rng rng(3);
    Matrix M = oracles::random_matrix(rng, 7, 7);
    Partition rp({2, 2, 3}), cp({1, 4, 2});
    Matrix R(7, 7);
    for (int i = 0; i < rp.count(); ++i)
        for (int j = 0; j < cp.count(); ++j)
            R.block(rp.offset(i), cp.offset(j), rp.size(i), cp.size(j)) =
                extract_block(M, rp, cp, i, j);
    CHECK((R - M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block_row_without_diagonal") {
    oracles::Rng rng(4);
    Matrix M = oracles::random_matrix(rng, 5, 5);
    Partition p({2, 3});
    CHECK(block_row_without_diagonal(M, p, 0).isApprox(M.block(0, 2, 2, 3)));

    Matrix I6 = Matrix::Identity(6, 6);
    Partition q({2, 2, 2});
    CHECK(block_row_without_diagonal(I6, q, 1).isZero(0.0));
    CHECK(block_row_without_diagonal(I6, q, 1).rows() == 2);
    CHECK(block_row_without_diagonal(I6, q, 1).cols() == 4);

    Partition single({4});
    Matrix M4 = oracles::random_matrix(rng, 4, 4);
    CHECK(block_row_without_diagonal(M4, single, 0).cols() == 0);
    CHECK(block_row_without_diagonal(M4, single, 0).rows() == 4);
}
