#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "regresslab/dataset.hpp"

using namespace regresslab;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

} // namespace

TEST(Rng, SameSeedSameStream) {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, NormalHasSaneMoments) {
    Rng rng(7);
    double sum = 0.0;
    double sum_sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum_sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.03);
    EXPECT_NEAR(sum_sq / n, 1.0, 0.05);
}

TEST(Dataset, ExactlyOneLabelKind) {
    Dataset d;
    d.x = Matrix(2, 1, {1, 2});
    EXPECT_THROW(d.validate(), ParameterError);
    d.y_real = Vector{1, 2};
    d.y_class = std::vector<int>{0, 1};
    EXPECT_THROW(d.validate(), ParameterError);
}

TEST(LoadCsv, MinimalFile) {
    const auto path = temp_file("regresslab_minimal.csv");
    write_file(path, "x,y\n1,2\n3,4\n");
    const Dataset d = load_csv(path.string(), "y", LabelKind::real);
    EXPECT_EQ(d.rows(), 2u);
    EXPECT_EQ(d.cols(), 1u);
    EXPECT_DOUBLE_EQ(d.x(0, 0), 1.0);
    EXPECT_DOUBLE_EQ((*d.y_real)[1], 4.0);
    EXPECT_EQ(d.feature_names, std::vector<std::string>{"x"});
}

TEST(LoadCsv, RentalRoundTripIsExact) {
    const Dataset rental = fixture_rental();
    const auto path = temp_file("regresslab_rental.csv");
    save_csv(rental, path.string(), "rent");
    const Dataset back = load_csv(path.string(), "rent", LabelKind::real);
    ASSERT_EQ(back.rows(), rental.rows());
    for (std::size_t i = 0; i < rental.rows(); ++i) {
        EXPECT_EQ(back.x(i, 0), rental.x(i, 0));
        EXPECT_EQ((*back.y_real)[i], (*rental.y_real)[i]);
    }
}

TEST(LoadCsv, RandomRoundTripIsBitExact) {
    Rng rng(11);
    Matrix x(5, 3);
    Vector y(5);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal() * 1e3;
        y[i] = rng.normal() / 7.0;
    }
    const Dataset d = make_regression_dataset(x, y);
    const auto path = temp_file("regresslab_roundtrip.csv");
    save_csv(d, path.string());
    const Dataset back = load_csv(path.string(), "y", LabelKind::real);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(back.x(i, j), d.x(i, j));
        EXPECT_EQ((*back.y_real)[i], (*d.y_real)[i]);
    }
}

TEST(LoadCsv, FractionalClassLabelIsParseError) {
    const auto path = temp_file("regresslab_badclass.csv");
    write_file(path, "x,y\n1,2.5\n");
    EXPECT_THROW(load_csv(path.string(), "y", LabelKind::cls), ParseError);
}

TEST(LoadCsv, MissingColumnIsSchemaError) {
    const auto path = temp_file("regresslab_nocol.csv");
    write_file(path, "x,y\n1,2\n");
    EXPECT_THROW(load_csv(path.string(), "label", LabelKind::real), SchemaError);
}

TEST(LoadCsv, NonNumericCellReportsPosition) {
    const auto path = temp_file("regresslab_badcell.csv");
    write_file(path, "x,y\n1,2\nfoo,3\n");
    try {
        load_csv(path.string(), "y", LabelKind::real);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
}

TEST(LoadCsv, EmptyFileThrows) {
    const auto path = temp_file("regresslab_empty.csv");
    write_file(path, "");
    EXPECT_THROW(load_csv(path.string(), "y", LabelKind::real), EmptyInputError);
    write_file(path, "x,y\n");
    EXPECT_THROW(load_csv(path.string(), "y", LabelKind::real), EmptyInputError);
}

TEST(LoadCsv, OneBasedLabelsShiftDown) {
    const auto path = temp_file("regresslab_onebased.csv");
    write_file(path, "x,y\n1,1\n2,3\n");
    const Dataset d = load_csv(path.string(), "y", LabelKind::cls, true);
    EXPECT_EQ((*d.y_class)[0], 0);
    EXPECT_EQ((*d.y_class)[1], 2);
}

TEST(FixtureRental, MatchesThePublishedPairs) {
    const Dataset d = fixture_rental();
    ASSERT_EQ(d.rows(), 6u);
    ASSERT_EQ(d.cols(), 1u);
    EXPECT_DOUBLE_EQ(d.x(0, 0), 78.0);
    EXPECT_DOUBLE_EQ((*d.y_real)[0], 6600.0);
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        mean_x += d.x(i, 0);
        mean_y += (*d.y_real)[i];
    }
    EXPECT_DOUBLE_EQ(mean_x / 6.0, 59.0);
    EXPECT_DOUBLE_EQ(mean_y / 6.0, 5100.0);
}

TEST(OneHot, PublishedExample) {
    const Matrix m = one_hot_encode({2}, 5);
    const double expected[5] = {0, 0, 1, 0, 0};
    for (std::size_t k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(m(0, k), expected[k]);
}

TEST(OneHot, SingleClass) {
    const Matrix m = one_hot_encode({0, 0}, 1);
    EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(m(1, 0), 1.0);
}

TEST(OneHot, Enumeration) {
    const Matrix m = one_hot_encode({0, 1, 0}, 2);
    EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(m(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(m(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(m(1, 1), 1.0);
    EXPECT_DOUBLE_EQ(m(2, 0), 1.0);
}

TEST(OneHot, EachRowHasExactlyOneOne) {
    Rng rng(13);
    std::vector<int> ids(50);
    for (auto& id : ids) id = static_cast<int>(rng.next_below(7));
    const Matrix m = one_hot_encode(ids, 7);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double row_sum = 0.0;
        int ones = 0;
        for (std::size_t k = 0; k < m.cols(); ++k) {
            row_sum += m(i, k);
            if (m(i, k) == 1.0) ++ones;
        }
        EXPECT_DOUBLE_EQ(row_sum, 1.0);
        EXPECT_EQ(ones, 1);
    }
}

TEST(OneHot, OutOfRangeThrows) {
    EXPECT_THROW(one_hot_encode({3}, 3), RangeError);
}

TEST(Standardize, HandExample) {
    const Dataset d = make_regression_dataset(Matrix(2, 1, {0, 2}), Vector{0, 0});
    const StandardizeResult r = standardize(d);
    EXPECT_DOUBLE_EQ(r.dataset.x(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(r.dataset.x(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(r.means[0], 1.0);
    EXPECT_DOUBLE_EQ(r.stds[0], 1.0);
}

TEST(Standardize, Idempotent) {
    Rng rng(17);
    Matrix x(20, 2);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 2; ++j) x(i, j) = rng.normal();
    const Dataset d = make_regression_dataset(x, Vector(20));
    const StandardizeResult once = standardize(d);
    const StandardizeResult twice = standardize(once.dataset);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            EXPECT_NEAR(twice.dataset.x(i, j), once.dataset.x(i, j), 1e-12);
}

TEST(Standardize, ConstantColumnMapsToZeros) {
    const Dataset d = make_regression_dataset(Matrix(2, 1, {5, 5}), Vector{1, 2});
    const StandardizeResult r = standardize(d);
    EXPECT_DOUBLE_EQ(r.dataset.x(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(r.dataset.x(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(r.stds[0], 1.0);
}

TEST(GenSine, NoiselessValues) {
    Rng rng(1);
    const Dataset d = gen_sine(3, 0.0, rng);
    EXPECT_DOUBLE_EQ(d.x(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(d.x(1, 0), 0.5);
    EXPECT_DOUBLE_EQ(d.x(2, 0), 1.0);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR((*d.y_real)[i], 0.0, 1e-15);
}

TEST(GenSine, QuarterPeriodIsOne) {
    Rng rng(1);
    const Dataset d = gen_sine(5, 0.0, rng);
    EXPECT_DOUBLE_EQ(d.x(1, 0), 0.25);
    EXPECT_DOUBLE_EQ((*d.y_real)[1], 1.0);
}

TEST(GenSine, NoiseStaysWithinFourSigma) {
    Rng rng(42);
    const Dataset d = gen_sine(10, 0.2, rng);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const double clean = std::sin(2.0 * std::numbers::pi * d.x(i, 0));
        EXPECT_LT(std::fabs((*d.y_real)[i] - clean), 0.8);
    }
}

TEST(GenSine, SameSeedBitIdentical) {
    Rng a(123);
    Rng b(123);
    const Dataset da = gen_sine(25, 0.3, a);
    const Dataset db = gen_sine(25, 0.3, b);
    for (std::size_t i = 0; i < 25; ++i) {
        EXPECT_EQ(da.x(i, 0), db.x(i, 0));
        EXPECT_EQ((*da.y_real)[i], (*db.y_real)[i]);
    }
}

TEST(GenTwoGaussians, LabelCountsExact) {
    Rng rng(5);
    const Dataset d = gen_two_gaussians(10, Vector{0, 0}, Vector{1, 1},
                                        Matrix::identity(2), rng);
    int count1 = 0;
    for (int y : *d.y_class) count1 += y;
    EXPECT_EQ(count1, 10);
    EXPECT_EQ(d.rows(), 20u);
}

TEST(GenTwoGaussians, EmpiricalMeanNearMu) {
    Rng rng(99);
    const Vector mu1{1.5, -0.5};
    const Dataset d = gen_two_gaussians(1000, Vector{0, 0}, mu1, Matrix::identity(2), rng);
    Vector mean(2);
    for (std::size_t i = 1000; i < 2000; ++i) {
        mean[0] += d.x(i, 0);
        mean[1] += d.x(i, 1);
    }
    EXPECT_NEAR(mean[0] / 1000.0, mu1[0], 0.15);
    EXPECT_NEAR(mean[1] / 1000.0, mu1[1], 0.15);
}

TEST(GenTwoGaussians, EqualMeansOverlap) {
    Rng rng(2);
    const Dataset d = gen_two_gaussians(2000, Vector{1, 1}, Vector{1, 1},
                                        Matrix::identity(2), rng);
    Vector mean0(2);
    Vector mean1(2);
    for (std::size_t i = 0; i < 2000; ++i) {
        mean0[0] += d.x(i, 0);
        mean0[1] += d.x(i, 1);
        mean1[0] += d.x(i + 2000, 0);
        mean1[1] += d.x(i + 2000, 1);
    }
    EXPECT_NEAR(mean0[0] / 2000.0, mean1[0] / 2000.0, 0.12);
    EXPECT_NEAR(mean0[1] / 2000.0, mean1[1] / 2000.0, 0.12);
}

TEST(GenTwoGaussians, NonSpdSigmaThrows) {
    Rng rng(3);
    const Matrix bad(2, 2, {1, 2, 2, 1});
    EXPECT_THROW(gen_two_gaussians(5, Vector{0, 0}, Vector{1, 1}, bad, rng),
                 NotPositiveDefiniteError);
}

TEST(WithBias, PrependsOnesColumn) {
    const Dataset d = fixture_rental();
    const Dataset aug = with_bias(d);
    EXPECT_TRUE(aug.bias_augmented);
    EXPECT_EQ(aug.cols(), 2u);
    for (std::size_t i = 0; i < aug.rows(); ++i) {
        EXPECT_DOUBLE_EQ(aug.x(i, 0), 1.0);
        EXPECT_DOUBLE_EQ(aug.x(i, 1), d.x(i, 0));
    }
}
