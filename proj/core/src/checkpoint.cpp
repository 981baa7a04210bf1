#include "subseg/checkpoint.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "subseg/error.hpp"

namespace subseg {

namespace {

constexpr std::uint32_t kMaxStringBytes = 1U << 20;

class Writer {
  public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }

    void u32(std::uint32_t v) {
        std::array<char, 4> bytes;
        for (std::size_t k = 0; k < 4; ++k) {
            bytes[k] = static_cast<char>((v >> (8 * k)) & 0xFF);
        }
        out_.write(bytes.data(), bytes.size());
    }

    void u64(std::uint64_t v) {
        std::array<char, 8> bytes;
        for (std::size_t k = 0; k < 8; ++k) {
            bytes[k] = static_cast<char>((v >> (8 * k)) & 0xFF);
        }
        out_.write(bytes.data(), bytes.size());
    }

    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

  private:
    std::ostream& out_;
};

class Reader {
  public:
    explicit Reader(std::istream& in) : in_(in) {}

    void bytes(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw DataError("checkpoint is truncated");
        }
    }

    std::uint8_t u8() {
        char c;
        bytes(&c, 1);
        return static_cast<std::uint8_t>(c);
    }

    std::uint32_t u32() {
        std::array<unsigned char, 4> b;
        bytes(reinterpret_cast<char*>(b.data()), b.size());
        std::uint32_t v = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
        }
        return v;
    }

    std::uint64_t u64() {
        std::array<unsigned char, 8> b;
        bytes(reinterpret_cast<char*>(b.data()), b.size());
        std::uint64_t v = 0;
        for (std::size_t k = 0; k < 8; ++k) {
            v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
        }
        return v;
    }

    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }

    std::string str() {
        const std::uint32_t n = u32();
        if (n > kMaxStringBytes) {
            throw DataError("checkpoint string length " + std::to_string(n) + " is implausible");
        }
        std::string s(n, '\0');
        bytes(s.data(), n);
        return s;
    }

  private:
    std::istream& in_;
};

void write_vocab(Writer& w, const StringIndex& index) {
    w.u32(static_cast<std::uint32_t>(index.size()));
    for (const auto& tok : index.tokens()) {
        w.str(tok);
    }
}

StringIndex read_vocab(Reader& r) {
    const std::uint32_t n = r.u32();
    std::vector<std::string> tokens;
    tokens.reserve(std::min<std::uint32_t>(n, 1U << 16));
    for (std::uint32_t i = 0; i < n; ++i) {
        tokens.push_back(r.str());
    }
    return StringIndex::from_tokens(std::move(tokens));
}

// Each tensor as (rows, cols) with element (r, c) at data()[r + c * rows]
// for matrices and at data()[r] for vectors.
template <typename Params, typename Fn>
void for_each_shaped(Params& p, Fn&& fn) {
    const auto matrix = [&](std::string_view name, auto& m) { fn(name, m.rows(), m.cols(), m.data()); };
    const auto vector = [&](std::string_view name, auto& v) { fn(name, v.size(), Eigen::Index{1}, v.data()); };
    matrix("word_emb", p.word_emb);
    matrix("pos_emb", p.pos_emb);
    matrix("dep_emb", p.dep_emb);
    matrix("fwd.w_x", p.fwd.w_x);
    matrix("fwd.w_h", p.fwd.w_h);
    vector("fwd.b", p.fwd.b);
    matrix("bwd.w_x", p.bwd.w_x);
    matrix("bwd.w_h", p.bwd.w_h);
    vector("bwd.b", p.bwd.b);
    vector("proj_w", p.proj_w);
    fn(std::string_view("proj_b"), Eigen::Index{1}, Eigen::Index{1}, &p.proj_b);
}

constexpr std::uint32_t kTensorCount = 11;

}  // namespace

void write_checkpoint(std::ostream& out, const Model& model) {
    Writer w(out);
    out.write(kCheckpointMagic.data(), static_cast<std::streamsize>(kCheckpointMagic.size()));
    w.u32(kCheckpointVersion);
    const TaggerDims& d = model.params.dims;
    w.u8(d.syntactic ? 1 : 0);
    for (int v : {d.word_vocab, d.pos_vocab, d.dep_vocab, d.word_dim, d.pos_dim, d.dep_dim, d.hidden}) {
        w.i32(v);
    }
    write_vocab(w, model.vocab.words);
    write_vocab(w, model.vocab.pos);
    write_vocab(w, model.vocab.dep);
    w.u32(kTensorCount);
    for_each_shaped(model.params, [&](std::string_view name, Eigen::Index rows, Eigen::Index cols, const double* data) {
        w.str(name);
        w.u32(static_cast<std::uint32_t>(rows));
        w.u32(static_cast<std::uint32_t>(cols));
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                w.f64(data[r + c * rows]);
            }
        }
    });
    if (!out) {
        throw DataError("failed to write checkpoint");
    }
}

Model read_checkpoint(std::istream& in) {
    Reader r(in);
    std::string magic(kCheckpointMagic.size(), '\0');
    r.bytes(magic.data(), magic.size());
    if (magic != kCheckpointMagic) {
        throw DataError("not a subseg checkpoint (bad magic bytes)");
    }
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion) {
        throw DataError("unsupported checkpoint version " + std::to_string(version));
    }
    const std::uint8_t mode = r.u8();
    if (mode > 1) {
        throw DataError("invalid mode flag in checkpoint");
    }
    TaggerDims d;
    d.syntactic = mode == 1;
    for (int* field : {&d.word_vocab, &d.pos_vocab, &d.dep_vocab, &d.word_dim, &d.pos_dim, &d.dep_dim, &d.hidden}) {
        *field = r.i32();
        if (*field < 1) {
            throw DataError("invalid dimension in checkpoint");
        }
    }
    Model model;
    model.vocab.words = read_vocab(r);
    model.vocab.pos = read_vocab(r);
    model.vocab.dep = read_vocab(r);
    if (model.vocab.words.size() != d.word_vocab || model.vocab.pos.size() != d.pos_vocab ||
        model.vocab.dep.size() != d.dep_vocab) {
        throw DataError("checkpoint vocabulary sizes disagree with declared dimensions");
    }
    if (r.u32() != kTensorCount) {
        throw DataError("unexpected tensor count in checkpoint");
    }
    model.params = zero_params(d);
    for_each_shaped(model.params, [&](std::string_view name, Eigen::Index rows, Eigen::Index cols, double* data) {
        const std::string stored = r.str();
        const std::uint32_t stored_rows = r.u32();
        const std::uint32_t stored_cols = r.u32();
        if (stored != name || stored_rows != rows || stored_cols != cols) {
            throw DataError("checkpoint tensor '" + stored + "' does not match expected '" + std::string(name) +
                            "' of shape " + std::to_string(rows) + "x" + std::to_string(cols));
        }
        for (Eigen::Index rr = 0; rr < rows; ++rr) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                data[rr + c * rows] = r.f64();
            }
        }
    });
    if (in.peek() != std::char_traits<char>::eof()) {
        throw DataError("trailing bytes after checkpoint data");
    }
    return model;
}

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    write_checkpoint(out, model);
}

Model load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return read_checkpoint(in);
}

}  // namespace subseg
