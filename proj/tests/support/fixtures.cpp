#include "fixtures.hpp"

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fixtures {

namespace fs = std::filesystem;
using novelty::PointSet;

std::vector<std::size_t> table1_cumulative() {
    std::vector<std::size_t> out;
    std::size_t total = 0;
    for (auto n : kTable1NewCounts) out.push_back(total += n);
    return out;
}

novelty::ProposalRecord make_record(std::string id, int year, bool is_new) {
    novelty::ProposalRecord r;
    r.doc_id = std::move(id);
    r.year = year;
    r.is_new = is_new;
    r.title = "title " + r.doc_id;
    r.objectives = "objectives";
    r.contents = "contents";
    r.outcomes = "outcomes";
    return r;
}

novelty::Corpus table1_corpus(int last_year) {
    std::vector<novelty::ProposalRecord> records;
    for (std::size_t y = 0; y < kTable1NewCounts.size(); ++y) {
        const int year = kTable1FirstYear + static_cast<int>(y);
        if (year > last_year) break;
        for (std::size_t i = 0; i < kTable1NewCounts[y]; ++i) {
            char id[32];
            std::snprintf(id, sizeof id, "T%d-%04zu", year, i);
            records.push_back(make_record(id, year));
        }
    }
    return novelty::Corpus(std::move(records));
}

std::string ids_for(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "p%04zu", i);
    return buf;
}

PointSet random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<std::string> ids;
    std::vector<double> coords(n * dim);
    for (std::size_t i = 0; i < n; ++i) ids.push_back(ids_for(i));
    for (auto& c : coords) c = normal(rng);
    return PointSet(std::move(ids), std::move(coords), dim);
}

PointSet line_points(const std::vector<double>& xs) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < xs.size(); ++i) ids.push_back(ids_for(i));
    return PointSet(std::move(ids), xs, 1);
}

PointSet tetrahedron() {
    return PointSet({"a", "b", "c", "d"}, {1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1}, 3);
}

PointSet square_with_outlier() {
    return PointSet({"a", "b", "c", "d", "e"}, {0, 0, 1, 0, 0, 1, 1, 1, 10, 10}, 2);
}

PointSet rigid_motion(const PointSet& points, double scale, std::uint64_t seed) {
    const std::size_t d = points.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;

    // Gram-Schmidt on a Gaussian matrix.
    std::vector<std::vector<double>> q(d, std::vector<double>(d));
    for (auto& row : q)
        for (auto& v : row) v = normal(rng);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double dot = 0.0;
            for (std::size_t t = 0; t < d; ++t) dot += q[i][t] * q[j][t];
            for (std::size_t t = 0; t < d; ++t) q[i][t] -= dot * q[j][t];
        }
        double norm = 0.0;
        for (double v : q[i]) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : q[i]) v /= norm;
    }
    std::vector<double> shift(d);
    for (auto& v : shift) v = 10.0 * normal(rng);

    std::vector<double> coords(points.size() * d);
    for (std::size_t p = 0; p < points.size(); ++p) {
        auto x = points.point(p);
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t t = 0; t < d; ++t) s += q[i][t] * x[t];
            coords[p * d + i] = scale * s + shift[i];
        }
    }
    return PointSet(points.ids(), std::move(coords), d);
}

namespace {

struct Neighborhoods {
    std::vector<std::vector<std::size_t>> knn;
    std::vector<double> kdist;
    std::vector<std::vector<double>> d;
};

Neighborhoods neighborhoods(const PointSet& points, std::size_t k) {
    const std::size_t n = points.size();
    Neighborhoods h;
    h.d.assign(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < points.dim(); ++t) {
                const double diff = points.point(i)[t] - points.point(j)[t];
                s += diff * diff;
            }
            h.d[i][j] = std::sqrt(s);
        }
    h.knn.resize(n);
    h.kdist.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        std::vector<std::size_t> order;
        for (std::size_t o = 0; o < n; ++o)
            if (o != p) order.push_back(o);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h.d[p][a] < h.d[p][b]; });
        order.resize(k);
        h.kdist[p] = h.d[p][order.back()];
        h.knn[p] = order;
    }
    return h;
}

} // namespace

std::vector<double> reference_lrd(const PointSet& points, std::size_t k) {
    const Neighborhoods h = neighborhoods(points, k);
    std::vector<double> lrd(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        double sum = 0.0;
        for (std::size_t o : h.knn[p]) sum += std::max(h.kdist[o], h.d[p][o]);
        lrd[p] = sum == 0.0 ? std::numeric_limits<double>::infinity() : static_cast<double>(k) / sum;
    }
    return lrd;
}

std::vector<double> reference_lof(const PointSet& points, std::size_t k) {
    const Neighborhoods h = neighborhoods(points, k);
    const std::vector<double> lrd = reference_lrd(points, k);
    std::vector<double> lof(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        double ratio = 0.0;
        for (std::size_t o : h.knn[p]) ratio += lrd[o] / lrd[p];
        lof[p] = ratio / static_cast<double>(k);
    }
    return lof;
}

double reference_mwu_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size(), n1 = a.size();

    // U of a chosen subset: pairs (x in subset, y outside) with x > y, ties 1/2,
    // counted in halves.
    std::vector<std::vector<int>> wins(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) wins[i][j] = pooled[i] > pooled[j] ? 2 : pooled[i] == pooled[j] ? 1 : 0;
    auto u2 = [&](const std::vector<std::size_t>& chosen) {
        std::vector<char> in(n, 0);
        for (auto i : chosen) in[i] = 1;
        long u = 0;
        for (auto i : chosen)
            for (std::size_t j = 0; j < n; ++j)
                if (!in[j]) u += wins[i][j];
        return u;
    };
    const long mean2 = static_cast<long>(n1 * (n - n1));

    std::vector<std::size_t> first(n1);
    std::iota(first.begin(), first.end(), 0);
    const long observed = std::labs(u2(first) - mean2);

    long total = 0, extreme = 0;
    std::vector<std::size_t> chosen;
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (chosen.size() == n1) {
            ++total;
            if (std::labs(u2(chosen) - mean2) >= observed) ++extreme;
            return;
        }
        for (std::size_t i = start; i + (n1 - chosen.size()) <= n; ++i) {
            chosen.push_back(i);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0);
    return static_cast<double>(extreme) / static_cast<double>(total);
}

TempDir::TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "novelty-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

novelty::SyntheticData write_synthetic_workspace(const novelty::Workspace& ws, const novelty::SyntheticSpec& spec) {
    novelty::SyntheticData data = novelty::generate_synthetic(spec);
    ws.create_directories();
    std::ostringstream corpus;
    novelty::serialize_proposals(data.corpus, corpus);
    novelty::atomic_write(ws.corpus_path(), corpus.str());
    for (int y = spec.first_year; y < spec.first_year + spec.years; ++y)
        for (auto tag : novelty::kAllComponents) {
            std::ostringstream bytes;
            novelty::write_embeddings(*data.embeddings.find(y, tag), bytes);
            novelty::atomic_write(ws.embedding_path(y, tag), bytes.str());
        }
    return data;
}

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    CliResult r;
    r.status = novelty::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace fixtures
