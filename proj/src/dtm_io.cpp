#include <fstream>
#include <sstream>

#include "feast/corpus.hpp"
#include "feast/error.hpp"

namespace feast {

namespace {
constexpr const char* kDtmMagic = "feast-dtm";
constexpr int kDtmVersion = 1;
}  // namespace

void save_dtm(const DocumentTermMatrix& dtm, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << kDtmMagic << ' ' << kDtmVersion << '\n';
    out << dtm.num_docs() << ' ' << dtm.num_terms() << ' ' << dtm.counts.nonZeros() << '\n';
    for (const auto& id : dtm.docs) out << id << '\n';
    for (const auto& term : dtm.terms) out << term << '\n';
    for (Eigen::Index d = 0; d < dtm.counts.outerSize(); ++d) {
        for (CountMatrix::InnerIterator it(dtm.counts, d); it; ++it) {
            out << d << ' ' << it.col() << ' ' << it.value() << '\n';
        }
    }
    if (!out) throw IoError("error while writing " + path.string());
}

DocumentTermMatrix load_dtm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    const auto fail = [&](const std::string& why) -> IoError {
        return IoError("malformed dtm file " + path.string() + ": " + why);
    };

    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kDtmMagic) throw fail("bad header");
    if (version != kDtmVersion) throw fail("unsupported version " + std::to_string(version));

    std::size_t n_docs = 0, n_terms = 0, nnz = 0;
    if (!(in >> n_docs >> n_terms >> nnz)) throw fail("bad dimensions");
    std::string line;
    std::getline(in, line);

    DocumentTermMatrix dtm;
    dtm.docs.reserve(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i) {
        if (!std::getline(in, line)) throw fail("truncated document list");
        dtm.docs.push_back(line);
    }
    dtm.terms.reserve(n_terms);
    for (std::size_t i = 0; i < n_terms; ++i) {
        if (!std::getline(in, line)) throw fail("truncated vocabulary");
        if (!dtm.terms.empty() && !(dtm.terms.back() < line)) throw fail("vocabulary not sorted");
        dtm.terms.push_back(line);
    }

    std::vector<Eigen::Triplet<std::int32_t>> triplets;
    triplets.reserve(nnz);
    dtm.doc_freq.assign(n_terms, 0);
    for (std::size_t i = 0; i < nnz; ++i) {
        std::size_t d = 0, t = 0;
        std::int64_t count = 0;
        if (!(in >> d >> t >> count)) throw fail("truncated triples");
        if (d >= n_docs || t >= n_terms || count <= 0) throw fail("triple out of range");
        triplets.emplace_back(static_cast<int>(d), static_cast<int>(t), static_cast<std::int32_t>(count));
        ++dtm.doc_freq[t];
    }
    dtm.counts.resize(static_cast<Eigen::Index>(n_docs), static_cast<Eigen::Index>(n_terms));
    dtm.counts.setFromTriplets(triplets.begin(), triplets.end());
    dtm.counts.makeCompressed();
    if (static_cast<std::size_t>(dtm.counts.nonZeros()) != nnz) throw fail("duplicate triples");
    return dtm;
}

}  // namespace feast
