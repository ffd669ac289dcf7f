#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cocite/analytics.hpp"

#include "support/random_corpus.hpp"

using namespace cocite;

namespace {

ArticleDissimilarity scored(std::string id, double value, JournalId journal = 0,
                            std::uint32_t matched = 10) {
    ArticleDissimilarity r;
    r.article_id = std::move(id);
    r.published_journal = journal;
    r.mean_dissimilarity = value;
    r.matched_refs = matched;
    r.scored = true;
    return r;
}

std::vector<ArticleDissimilarity> ladder(std::size_t n, double step) {
    std::vector<ArticleDissimilarity> results;
    for (std::size_t k = 1; k <= n; ++k) {
        results.push_back(scored("a" + std::to_string(k), step * static_cast<double>(k)));
    }
    return results;
}

}  // namespace

TEST_CASE("histogram bins") {
    SECTION("a single value lands in exactly one bin") {
        const Histogram h = histogram({scored("a", 0.70)}, 0.02);
        REQUIRE(h.counts.size() == 50);
        std::uint64_t total = 0;
        std::size_t nonzero = 0;
        for (const auto c : h.counts) {
            total += c;
            if (c > 0) ++nonzero;
        }
        CHECK(total == 1);
        CHECK(nonzero == 1);
    }
    SECTION("bins are half-open with a closed last bin") {
        // width 0.25 is exactly representable, so the edges are exact
        const Histogram h = histogram({scored("a", 0.0), scored("b", 0.25), scored("c", 0.3),
                                       scored("d", 0.5), scored("e", 1.0)},
                                      0.25);
        REQUIRE(h.counts.size() == 4);
        CHECK(h.counts[0] == 1);
        CHECK(h.counts[1] == 2);  // 0.25 belongs to [0.25, 0.5)
        CHECK(h.counts[2] == 1);
        CHECK(h.counts[3] == 1);  // 1.0 belongs to the closed last bin
        CHECK(h.lower(3) == 0.75);
        CHECK(h.upper(3) == 1.0);
    }
    SECTION("counts match an independent scan on interior points") {
        std::mt19937 rng(61);
        const double width = 0.02;
        std::vector<ArticleDissimilarity> results;
        for (int i = 0; i < 500; ++i) {
            const double v = (static_cast<double>(rng() % 50) + 0.5) * width;
            results.push_back(scored("a" + std::to_string(i), v));
        }
        const Histogram h = histogram(results, width);
        std::vector<std::uint64_t> expected(h.counts.size(), 0);
        for (const auto& r : results) {
            std::size_t k = 0;
            while (k + 1 < expected.size() &&
                   r.mean_dissimilarity >= static_cast<double>(k + 1) * width) {
                ++k;
            }
            expected[k]++;
        }
        CHECK(h.counts == expected);
    }
    SECTION("unscored articles are ignored") {
        ArticleDissimilarity u;
        const Histogram h = histogram({u}, 0.5);
        CHECK(h.counts == std::vector<std::uint64_t>{0, 0});
    }
    SECTION("bin width is validated") {
        CHECK_THROWS_AS(histogram({}, 0.0), ConfigError);
        CHECK_THROWS_AS(histogram({}, 1.5), ConfigError);
    }
    SECTION("ragged widths still end at 1") {
        const Histogram h = histogram({scored("a", 0.95)}, 0.3);
        REQUIRE(h.counts.size() == 4);
        CHECK(h.upper(3) == 1.0);
        CHECK(h.counts[3] == 1);
    }
}

TEST_CASE("histogram file layout") {
    const Histogram h =
        histogram({scored("a", 0.1), scored("b", 0.6), scored("c", 0.7), scored("d", 0.8)}, 0.25);
    std::ostringstream out;
    write_histogram_csv(out, h);
    CHECK(out.str() ==
          "bin_lower,bin_upper,count\n"
          "0,0.25,1\n"
          "0.25,0.5,0\n"
          "0.5,0.75,2\n"
          "0.75,1,1\n");
}

TEST_CASE("decile classes on an even ladder") {
    // 20 articles at 0.05, 0.10, ..., 1.00: every class holds exactly two
    const auto results = ladder(20, 0.05);
    const DecileClasses c = decile_classes(results);

    for (std::size_t k = 0; k < 10; ++k) {
        REQUIRE(c.size(k) == 2);
        // members arrive in input order: articles 2k+1 and 2k+2
        CHECK(results[c.members[k][0]].article_id == "a" + std::to_string(2 * k + 1));
        CHECK(results[c.members[k][1]].article_id == "a" + std::to_string(2 * k + 2));
    }
    CHECK(c.breakpoints[0] == results[1].mean_dissimilarity);   // 10% quantile = 0.10
    CHECK(c.breakpoints[8] == results[17].mean_dissimilarity);  // 90% quantile = 0.90
    CHECK(c.lower(0) == 0.0);
    CHECK(c.upper(9) == 1.0);
    CHECK(c.lower(5) == c.breakpoints[4]);
}

TEST_CASE("decile edge behavior") {
    SECTION("all-equal values collapse into the first class") {
        std::vector<ArticleDissimilarity> results;
        for (int i = 0; i < 12; ++i) results.push_back(scored("a" + std::to_string(i), 0.7));
        const DecileClasses c = decile_classes(results);
        CHECK(c.size(0) == 12);
        for (std::size_t k = 1; k < 10; ++k) CHECK(c.size(k) == 0);
    }
    SECTION("ties always fall into the lower class") {
        std::vector<ArticleDissimilarity> results;
        for (int i = 0; i < 5; ++i) results.push_back(scored("lo" + std::to_string(i), 0.1));
        for (int i = 0; i < 5; ++i) results.push_back(scored("hi" + std::to_string(i), 0.9));
        const DecileClasses c = decile_classes(results);
        CHECK(c.size(0) == 5);
        CHECK(c.size(5) == 5);  // first breakpoint that reaches 0.9
        for (std::size_t k : {1, 2, 3, 4, 6, 7, 8, 9}) CHECK(c.size(k) == 0);
    }
    SECTION("fewer than ten articles is an error") {
        CHECK_THROWS_AS(decile_classes(ladder(9, 0.1)), StageError);
    }
    SECTION("unscored input is rejected") {
        auto results = ladder(10, 0.05);
        results.push_back({});
        CHECK_THROWS_AS(decile_classes(results), StageError);
    }
}

TEST_CASE("decile membership depends on ranks only") {
    std::mt19937 rng(314);
    std::vector<ArticleDissimilarity> results;
    for (int i = 0; i < 97; ++i) {
        results.push_back(
            scored("a" + std::to_string(i), static_cast<double>(rng() % 1000) / 1000.0));
    }
    const DecileClasses base = decile_classes(results);

    SECTION("the classes partition the input") {
        std::vector<int> seen(results.size(), 0);
        for (std::size_t k = 0; k < 10; ++k) {
            for (const auto i : base.members[k]) seen.at(i)++;
        }
        CHECK(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(results.size()));
    }
    SECTION("strictly increasing transforms keep the membership") {
        for (const auto transform : {+[](double v) { return v / 2.0; },
                                     +[](double v) { return v * v; }}) {
            auto mapped = results;
            for (auto& r : mapped) r.mean_dissimilarity = transform(r.mean_dissimilarity);
            const DecileClasses c = decile_classes(mapped);
            for (std::size_t k = 0; k < 10; ++k) CHECK(c.members[k] == base.members[k]);
        }
    }
}

TEST_CASE("multidisciplinary shares per class") {
    auto results = ladder(20, 0.05);
    // the four highest-value articles come from journal 7
    for (std::size_t i = 16; i < 20; ++i) results[i].published_journal = 7;

    SECTION("no flagged journals means all shares are zero") {
        const CategoryMap categories(8);
        const DecileShareReport report =
            multidisciplinary_share(decile_classes(results), results, categories);
        for (const auto share : report.multidisciplinary_share) CHECK(share == 0.0);
    }
    SECTION("flagged journals concentrated at the top show up there") {
        CategoryMap categories(8);
        categories.add(7, "multidisciplinary sciences", true);
        const DecileClasses classes = decile_classes(results);
        const DecileShareReport report = multidisciplinary_share(classes, results, categories);
        CHECK(report.multidisciplinary_share[9] == 1.0);
        CHECK(report.multidisciplinary_share[8] == 1.0);
        CHECK(report.multidisciplinary_share[0] == 0.0);
        CHECK(report.multidisciplinary_share[9] > report.multidisciplinary_share[0]);
    }
}

TEST_CASE("decile report layout") {
    DecileClasses classes;
    classes.breakpoints = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    for (std::size_t k = 0; k < 10; ++k) classes.members[k] = {k};
    DecileShareReport shares;
    shares.multidisciplinary_share[9] = 0.5;

    std::ostringstream out;
    write_decile_report(out, classes, shares);
    CHECK(out.str() ==
          "class,lower,upper,size,multidisciplinary_share\n"
          "1,0,0.1,1,0\n"
          "2,0.1,0.2,1,0\n"
          "3,0.2,0.3,1,0\n"
          "4,0.3,0.4,1,0\n"
          "5,0.4,0.5,1,0\n"
          "6,0.5,0.6,1,0\n"
          "7,0.6,0.7,1,0\n"
          "8,0.7,0.8,1,0\n"
          "9,0.8,0.9,1,0\n"
          "10,0.9,1,1,0.5\n");
}

namespace {

ArticleRecord citing_article(std::string id, std::vector<JournalId> cites) {
    ArticleRecord a;
    a.article_id = std::move(id);
    a.published_journal = 0;
    a.pub_year = 2020;
    a.cited_occurrences = std::move(cites);
    return a;
}

}  // namespace

TEST_CASE("per-article category breakdown") {
    CategoryMap categories(6);
    categories.add(2, "cat a", false);
    categories.add(3, "cat a", false);
    categories.add(3, "cat b", false);
    // journal 4 stays uncategorized

    SECTION("single-category citations give one full share") {
        const auto b = article_category_breakdown(citing_article("x", {2, 2, 2}), categories);
        REQUIRE_FALSE(b.empty);
        REQUIRE(b.shares.size() == 1);
        CHECK(b.shares[0].first == "cat a");
        CHECK(b.shares[0].second == 1.0);
        CHECK(b.distinct_categories == 1);
    }
    SECTION("multi-category journals split their citation weight equally") {
        const auto b = article_category_breakdown(citing_article("x", {2, 3}), categories);
        REQUIRE(b.shares.size() == 2);
        CHECK(b.shares[0].first == "cat a");
        CHECK(b.shares[0].second == 0.75);
        CHECK(b.shares[1].first == "cat b");
        CHECK(b.shares[1].second == 0.25);
        CHECK(b.distinct_categories == 2);
        CHECK(b.uncategorized_refs == 0);
    }
    SECTION("uncategorized citations are excluded but counted") {
        const auto b = article_category_breakdown(citing_article("x", {2, 4, 4}), categories);
        REQUIRE(b.shares.size() == 1);
        CHECK(b.shares[0].second == 1.0);
        CHECK(b.uncategorized_refs == 2);
    }
    SECTION("nothing categorized leaves an empty, flagged breakdown") {
        const auto b = article_category_breakdown(citing_article("x", {4, 4}), categories);
        CHECK(b.empty);
        CHECK(b.shares.empty());
        CHECK(b.uncategorized_refs == 2);
    }
    SECTION("shares always sum to one when present") {
        std::mt19937 rng(1234);
        CategoryMap wide(30);
        for (JournalId j = 0; j < 30; ++j) {
            const std::size_t n_cats = 1 + testgen::draw(rng, 3);
            for (std::size_t c = 0; c < n_cats; ++c) {
                wide.add(j, "cat" + std::to_string(testgen::draw(rng, 8)), false);
            }
        }
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<JournalId> cites;
            const std::size_t refs = 1 + testgen::draw(rng, 15);
            for (std::size_t k = 0; k < refs; ++k) cites.push_back(testgen::draw(rng, 30));
            const auto b = article_category_breakdown(citing_article("x", std::move(cites)), wide);
            REQUIRE_FALSE(b.empty);
            double sum = 0.0;
            for (const auto& [cat, share] : b.shares) {
                CHECK(share > 0.0);
                sum += share;
            }
            REQUIRE(std::fabs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("distinct cited categories count unions, not occurrences") {
    CategoryMap categories(6);
    categories.add(2, "cat a", false);
    categories.add(3, "cat a", false);
    categories.add(3, "cat b", false);
    CHECK(distinct_cited_categories(citing_article("x", {2, 2, 3, 3}), categories) == 2);
    CHECK(distinct_cited_categories(citing_article("x", {4}), categories) == 0);
    CHECK(distinct_cited_categories(citing_article("x", {}), categories) == 0);
}

TEST_CASE("category diversity per decile class") {
    SECTION("all single-category citations give means of one") {
        CategoryMap categories(40);
        for (JournalId j = 20; j < 40; ++j) categories.add(j, "only cat", false);
        Corpus corpus;
        auto results = ladder(20, 0.05);
        for (std::size_t i = 0; i < 20; ++i) {
            corpus.push_back(
                citing_article(results[i].article_id, {static_cast<JournalId>(20 + i)}));
        }
        const DiversityReport report = category_diversity_by_decile(
            decile_classes(results), results, corpus, categories);
        for (const auto mean : report.mean_distinct_categories) CHECK(mean == 1.0);
    }
    SECTION("rising diversity produces strictly increasing class means") {
        CategoryMap categories(60);
        for (JournalId j = 30; j < 60; ++j) {
            categories.add(j, "cat" + std::to_string(j), false);
        }
        auto results = ladder(20, 0.05);
        Corpus corpus;
        for (std::size_t i = 0; i < 20; ++i) {
            std::vector<JournalId> cites;
            for (std::size_t k = 0; k <= i; ++k) cites.push_back(static_cast<JournalId>(30 + k));
            corpus.push_back(citing_article(results[i].article_id, std::move(cites)));
        }
        const DiversityReport report = category_diversity_by_decile(
            decile_classes(results), results, corpus, categories);
        for (std::size_t k = 1; k < 10; ++k) {
            CHECK(report.mean_distinct_categories[k] > report.mean_distinct_categories[k - 1]);
        }
        CHECK(report.mean_distinct_categories[0] == 1.5);  // articles citing 1 and 2 categories
    }
}

TEST_CASE("diversity and breakdown file layouts") {
    SECTION("diversity report") {
        DiversityReport report;
        for (std::size_t k = 0; k < 10; ++k) {
            report.mean_distinct_categories[k] = static_cast<double>(k) + 0.5;
        }
        std::ostringstream out;
        write_diversity_report(out, report);
        CHECK(out.str() ==
              "class,mean_distinct_categories\n"
              "1,0.5\n2,1.5\n3,2.5\n4,3.5\n5,4.5\n6,5.5\n7,6.5\n8,7.5\n9,8.5\n10,9.5\n");
    }
    SECTION("per-article breakdown") {
        CategoryMap categories(6);
        categories.add(2, "cat a", false);
        categories.add(3, "cat a", false);
        categories.add(3, "cat b", false);
        std::vector<ArticleCategoryBreakdown> breakdowns;
        breakdowns.push_back(article_category_breakdown(citing_article("A7", {2, 3}), categories));
        breakdowns.push_back(article_category_breakdown(citing_article("A8", {4}), categories));
        std::ostringstream out;
        write_breakdown_csv(out, breakdowns);
        CHECK(out.str() ==
              "article_id,category,share\n"
              "A7,cat a,0.75\n"
              "A7,cat b,0.25\n");
    }
}
