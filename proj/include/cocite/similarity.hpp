#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include "cocite/csv.hpp"
#include "cocite/errors.hpp"
#include "cocite/profiles.hpp"
#include "cocite/registry.hpp"

namespace cocite {

enum class StorageMode { sparse, dense };

struct SimilarityOptions {
    StorageMode storage = StorageMode::sparse;
    // Sparse entries with similarity <= floor are dropped. 0 keeps every
    // nonzero entry.
    double sparsity_floor = 0.0;
    unsigned threads = 1;
    // Backing file for dense mode; ignored for sparse.
    std::string dense_path;
};

namespace detail {

inline std::string errno_message(const std::string& what, const std::string& path) {
    return what + " " + path + ": " + std::strerror(errno);
}

// Read-only memory map of a whole file.
class MappedFile {
public:
    MappedFile() = default;

    explicit MappedFile(const std::string& path) {
        const int fd = ::open(path.c_str(), O_RDONLY);
        if (fd < 0) throw StageError(errno_message("cannot open", path));
        struct stat st{};
        if (::fstat(fd, &st) != 0) {
            ::close(fd);
            throw StageError(errno_message("cannot stat", path));
        }
        size_ = static_cast<std::size_t>(st.st_size);
        if (size_ > 0) {
            void* p = ::mmap(nullptr, size_, PROT_READ, MAP_PRIVATE, fd, 0);
            if (p == MAP_FAILED) {
                ::close(fd);
                throw StageError(errno_message("cannot map", path));
            }
            data_ = p;
        }
        ::close(fd);
    }

    MappedFile(MappedFile&& other) noexcept : data_(other.data_), size_(other.size_) {
        other.data_ = nullptr;
        other.size_ = 0;
    }
    MappedFile& operator=(MappedFile&& other) noexcept {
        if (this != &other) {
            reset();
            data_ = other.data_;
            size_ = other.size_;
            other.data_ = nullptr;
            other.size_ = 0;
        }
        return *this;
    }
    MappedFile(const MappedFile&) = delete;
    MappedFile& operator=(const MappedFile&) = delete;
    ~MappedFile() { reset(); }

    const unsigned char* data() const { return static_cast<const unsigned char*>(data_); }
    std::size_t size() const { return size_; }

private:
    void reset() {
        if (data_ != nullptr) ::munmap(data_, size_);
        data_ = nullptr;
        size_ = 0;
    }

    void* data_ = nullptr;
    std::size_t size_ = 0;
};

constexpr std::size_t kDenseHeaderBytes = 8;

}  // namespace detail

// Symmetric journal-journal similarity. The diagonal is 1 by definition and
// never stored explicitly in sparse mode; a journal with an empty citation
// profile has similarity 0 to every other journal.
//
// Sparse mode keeps the strict upper triangle (g < h) in compressed rows.
// Dense mode is a memory-mapped file: an 8-byte little-endian dimension
// followed by the full n x n matrix as row-major float32, diagonal included.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;

    static SimilarityMatrix sparse(JournalId dim,
                                   std::vector<std::size_t> row_start,
                                   std::vector<JournalId> col,
                                   std::vector<double> value) {
        SimilarityMatrix m;
        m.dim_ = dim;
        m.mode_ = StorageMode::sparse;
        m.row_start_ = std::move(row_start);
        m.col_ = std::move(col);
        m.value_ = std::move(value);
        return m;
    }

    static SimilarityMatrix open_dense(const std::string& path) {
        static_assert(std::endian::native == std::endian::little,
                      "dense matrix files are little-endian");
        detail::MappedFile map(path);
        if (map.size() < detail::kDenseHeaderBytes) {
            throw StageError("dense matrix file too short: " + path);
        }
        std::uint64_t dim = 0;
        for (int i = 0; i < 8; ++i) dim |= static_cast<std::uint64_t>(map.data()[i]) << (8 * i);
        const std::uint64_t expected =
            detail::kDenseHeaderBytes + dim * dim * sizeof(float);
        if (map.size() != expected) {
            throw StageError("dense matrix file size does not match its header: " + path);
        }
        SimilarityMatrix m;
        m.dim_ = static_cast<JournalId>(dim);
        m.mode_ = StorageMode::dense;
        m.map_ = std::move(map);
        return m;
    }

    JournalId dim() const { return dim_; }
    StorageMode storage() const { return mode_; }

    std::size_t stored_entries() const {
        if (mode_ == StorageMode::sparse) return value_.size();
        return static_cast<std::size_t>(dim_) * dim_;
    }

    double lookup(JournalId g, JournalId h) const {
        if (g >= dim_ || h >= dim_) {
            throw StageError("similarity lookup out of range: " + std::to_string(g) + "," +
                             std::to_string(h));
        }
        if (g == h) return 1.0;
        if (mode_ == StorageMode::dense) {
            return static_cast<double>(cell(g, h));
        }
        if (g > h) std::swap(g, h);
        const auto begin = col_.begin() + static_cast<std::ptrdiff_t>(row_start_[g]);
        const auto end = col_.begin() + static_cast<std::ptrdiff_t>(row_start_[g + 1]);
        const auto it = std::lower_bound(begin, end, h);
        if (it == end || *it != h) return 0.0;
        return value_[static_cast<std::size_t>(it - col_.begin())];
    }

    // Visits stored off-diagonal similarities as (g, h, value) with g < h,
    // rows ascending. Dense zeros are skipped so both modes yield the same
    // kind of stream.
    template <class F>
    void for_each_entry(F&& f) const {
        if (mode_ == StorageMode::sparse) {
            for (JournalId g = 0; g < dim_; ++g) {
                for (std::size_t k = row_start_[g]; k < row_start_[g + 1]; ++k) {
                    f(g, col_[k], value_[k]);
                }
            }
            return;
        }
        for (JournalId g = 0; g < dim_; ++g) {
            for (JournalId h = g + 1; h < dim_; ++h) {
                const float v = cell(g, h);
                if (v != 0.0f) f(g, h, static_cast<double>(v));
            }
        }
    }

    const std::vector<JournalId>& empty_profiles() const { return empty_profiles_; }
    void set_empty_profiles(std::vector<JournalId> ids) { empty_profiles_ = std::move(ids); }

private:
    float cell(JournalId g, JournalId h) const {
        const std::size_t offset = detail::kDenseHeaderBytes +
                                   (static_cast<std::size_t>(g) * dim_ + h) * sizeof(float);
        float v;
        std::memcpy(&v, map_.data() + offset, sizeof(float));
        return v;
    }

    JournalId dim_ = 0;
    StorageMode mode_ = StorageMode::sparse;
    std::vector<std::size_t> row_start_;
    std::vector<JournalId> col_;
    std::vector<double> value_;
    detail::MappedFile map_;
    std::vector<JournalId> empty_profiles_;
};

namespace detail {

// Profiles re-bucketed by citing journal: for each citing journal j, the
// (cited, share) pairs with cited ascending. This is the join side of the
// all-pairs computation.
struct InvertedIndex {
    std::vector<std::size_t> start;
    std::vector<JournalId> cited;
    std::vector<double> share;
};

inline InvertedIndex invert_profiles(const ProfileSet& profiles) {
    const JournalId n = profiles.journals();
    InvertedIndex idx;
    idx.start.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t k = 0; k < profiles.entries(); ++k) idx.start[profiles.citing[k] + 1]++;
    for (JournalId j = 0; j < n; ++j) idx.start[j + 1] += idx.start[j];
    idx.cited.resize(profiles.entries());
    idx.share.resize(profiles.entries());
    std::vector<std::size_t> cursor(idx.start.begin(), idx.start.end() - 1);
    for (JournalId g = 0; g < n; ++g) {
        for (std::size_t k = profiles.begin(g); k < profiles.end(g); ++k) {
            const std::size_t slot = cursor[profiles.citing[k]]++;
            idx.cited[slot] = g;
            idx.share[slot] = profiles.share[k];
        }
    }
    return idx;
}

class DenseWriter {
public:
    DenseWriter(const std::string& path, JournalId dim) : path_(path) {
        static_assert(std::endian::native == std::endian::little,
                      "dense matrix files are little-endian");
        fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd_ < 0) throw StageError(errno_message("cannot create", path));
        unsigned char header[kDenseHeaderBytes];
        const std::uint64_t d = dim;
        for (int i = 0; i < 8; ++i) header[i] = static_cast<unsigned char>((d >> (8 * i)) & 0xff);
        if (::pwrite(fd_, header, sizeof(header), 0) != static_cast<ssize_t>(sizeof(header))) {
            throw StageError(errno_message("cannot write header of", path));
        }
        const off_t total = static_cast<off_t>(kDenseHeaderBytes +
                                               static_cast<std::uint64_t>(dim) * dim * sizeof(float));
        if (::ftruncate(fd_, total) != 0) {
            throw StageError(errno_message("cannot size", path));
        }
        dim_ = dim;
    }

    ~DenseWriter() {
        if (fd_ >= 0) ::close(fd_);
    }
    DenseWriter(const DenseWriter&) = delete;
    DenseWriter& operator=(const DenseWriter&) = delete;

    // Safe to call concurrently for distinct rows.
    void write_row(JournalId g, const float* row) const {
        const off_t offset = static_cast<off_t>(
            kDenseHeaderBytes + static_cast<std::uint64_t>(g) * dim_ * sizeof(float));
        const std::size_t bytes = static_cast<std::size_t>(dim_) * sizeof(float);
        std::size_t done = 0;
        while (done < bytes) {
            const ssize_t w = ::pwrite(fd_, reinterpret_cast<const char*>(row) + done,
                                       bytes - done, offset + static_cast<off_t>(done));
            if (w <= 0) throw StageError(errno_message("cannot write row to", path_));
            done += static_cast<std::size_t>(w);
        }
    }

    void finish() {
        if (::close(fd_) != 0) {
            fd_ = -1;
            throw StageError(errno_message("cannot finish", path_));
        }
        fd_ = -1;
    }

private:
    std::string path_;
    int fd_ = -1;
    JournalId dim_ = 0;
};

}  // namespace detail

// Computes every pairwise similarity S(g, h) = sum_j min(p_jg, p_jh) over
// the shared citing-journal axis. Work is split by row of the matrix; each
// row accumulates its contributions in ascending citing-journal order, so
// the result is bit-identical for any thread count.
inline SimilarityMatrix pairwise_similarity(const ProfileSet& profiles,
                                            const SimilarityOptions& opts = {}) {
    const JournalId n = profiles.journals();
    const bool dense = opts.storage == StorageMode::dense;
    if (dense && opts.dense_path.empty()) {
        throw ConfigError("dense similarity storage needs a backing file path");
    }

    const detail::InvertedIndex index = detail::invert_profiles(profiles);

    std::optional<detail::DenseWriter> writer;
    if (dense) writer.emplace(opts.dense_path, n);

    std::vector<std::vector<std::pair<JournalId, double>>> rows;
    if (!dense) rows.resize(n);

    std::atomic<JournalId> next_row{0};
    const unsigned n_threads = std::max(1u, opts.threads);
    std::vector<std::exception_ptr> failures(n_threads);

    auto worker = [&](unsigned tid) {
        try {
            std::vector<double> scratch(n, 0.0);
            std::vector<JournalId> touched;
            std::vector<float> row_buf;
            if (dense) row_buf.resize(n);
            for (;;) {
                const JournalId g = next_row.fetch_add(1, std::memory_order_relaxed);
                if (g >= n) break;
                for (std::size_t k = profiles.begin(g); k < profiles.end(g); ++k) {
                    const JournalId j = profiles.citing[k];
                    const double pg = profiles.share[k];
                    std::size_t lo = index.start[j];
                    const std::size_t hi = index.start[j + 1];
                    if (!dense) {
                        // Only h > g matters; the bucket is sorted by cited id.
                        lo = static_cast<std::size_t>(
                            std::upper_bound(index.cited.begin() + static_cast<std::ptrdiff_t>(lo),
                                             index.cited.begin() + static_cast<std::ptrdiff_t>(hi),
                                             g) -
                            index.cited.begin());
                    }
                    for (std::size_t t = lo; t < hi; ++t) {
                        const JournalId h = index.cited[t];
                        if (dense && h == g) continue;
                        if (scratch[h] == 0.0) touched.push_back(h);
                        scratch[h] += std::min(pg, index.share[t]);
                    }
                }
                if (dense) {
                    std::fill(row_buf.begin(), row_buf.end(), 0.0f);
                    for (const JournalId h : touched) {
                        row_buf[h] = static_cast<float>(std::min(scratch[h], 1.0));
                        scratch[h] = 0.0;
                    }
                    row_buf[g] = 1.0f;
                    writer->write_row(g, row_buf.data());
                } else {
                    std::sort(touched.begin(), touched.end());
                    auto& out = rows[g];
                    out.reserve(touched.size());
                    for (const JournalId h : touched) {
                        const double v = std::min(scratch[h], 1.0);
                        scratch[h] = 0.0;
                        if (v > opts.sparsity_floor) out.emplace_back(h, v);
                    }
                }
                touched.clear();
            }
        } catch (...) {
            failures[tid] = std::current_exception();
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    SimilarityMatrix result;
    if (dense) {
        writer->finish();
        result = SimilarityMatrix::open_dense(opts.dense_path);
    } else {
        std::vector<std::size_t> row_start(static_cast<std::size_t>(n) + 1, 0);
        std::size_t total = 0;
        for (JournalId g = 0; g < n; ++g) {
            row_start[g] = total;
            total += rows[g].size();
        }
        row_start[n] = total;
        std::vector<JournalId> col;
        std::vector<double> value;
        col.reserve(total);
        value.reserve(total);
        for (JournalId g = 0; g < n; ++g) {
            for (const auto& [h, v] : rows[g]) {
                col.push_back(h);
                value.push_back(v);
            }
            rows[g].clear();
            rows[g].shrink_to_fit();
        }
        result = SimilarityMatrix::sparse(n, std::move(row_start), std::move(col),
                                          std::move(value));
    }
    result.set_empty_profiles(profiles.empty_profiles);
    return result;
}

// --- text form --------------------------------------------------------------
//
// One row per stored off-diagonal pair, upper triangle only. The diagonal is
// implied and omitted; so are zero pairs.

inline void write_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix) {
    std::string buf;
    buf.reserve(64 * 1024);
    csv::append_row(buf, {"g_id", "h_id", "similarity"});
    matrix.for_each_entry([&](JournalId g, JournalId h, double v) {
        csv::append_row(buf, {std::to_string(g), std::to_string(h), csv::format_double(v)});
        if (buf.size() >= 48 * 1024) {
            out << buf;
            buf.clear();
        }
    });
    out << buf;
}

inline SimilarityMatrix read_matrix_csv(const std::string& path, JournalId dim) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open similarity matrix: " + path);
    std::vector<std::vector<std::pair<JournalId, double>>> rows(dim);
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!csv::split_line(line, ',', fields) || fields.size() != 3) {
            throw ParseError(path, line_no, "expected g_id,h_id,similarity");
        }
        if (line_no == 1 && fields[0] == "g_id") continue;
        auto g = csv::parse_int(fields[0]);
        auto h = csv::parse_int(fields[1]);
        auto v = csv::parse_double(fields[2]);
        if (!g || !h || !v || *g < 0 || *h < 0 || *g >= static_cast<std::int64_t>(dim) ||
            *h >= static_cast<std::int64_t>(dim)) {
            throw ParseError(path, line_no, "invalid similarity row");
        }
        if (*g == *h) throw ParseError(path, line_no, "diagonal entries are implied, not stored");
        if (*v < 0.0 || *v > 1.0) throw ParseError(path, line_no, "similarity outside [0, 1]");
        JournalId a = static_cast<JournalId>(*g);
        JournalId b = static_cast<JournalId>(*h);
        if (a > b) std::swap(a, b);
        rows[a].emplace_back(b, *v);
    }
    std::vector<std::size_t> row_start(static_cast<std::size_t>(dim) + 1, 0);
    std::vector<JournalId> col;
    std::vector<double> value;
    std::size_t total = 0;
    for (JournalId g = 0; g < dim; ++g) {
        auto& row = rows[g];
        std::sort(row.begin(), row.end());
        for (std::size_t k = 1; k < row.size(); ++k) {
            if (row[k].first == row[k - 1].first) {
                throw StageError("duplicate similarity pair in " + path + ": " +
                                 std::to_string(g) + "," + std::to_string(row[k].first));
            }
        }
        row_start[g] = total;
        total += row.size();
    }
    row_start[dim] = total;
    col.reserve(total);
    value.reserve(total);
    for (JournalId g = 0; g < dim; ++g) {
        for (const auto& [h, v] : rows[g]) {
            col.push_back(h);
            value.push_back(v);
        }
    }
    return SimilarityMatrix::sparse(dim, std::move(row_start), std::move(col), std::move(value));
}

}  // namespace cocite
