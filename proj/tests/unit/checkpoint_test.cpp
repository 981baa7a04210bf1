#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "subseg/checkpoint.hpp"
#include "subseg/error.hpp"

namespace subseg {
namespace {

Model sample_model(bool syntactic) {
    Model m;
    m.vocab.words.add("hello");
    m.vocab.words.add("здравей");
    m.vocab.pos.add("NOUN");
    m.vocab.dep.add("obj");
    m.vocab.dep.add("root");
    TaggerDims d = dims_for(m.vocab, syntactic);
    d.word_dim = 5;
    d.pos_dim = 2;
    d.dep_dim = 3;
    d.hidden = 3;
    m.params = init_params(d, 99);
    m.params.proj_b = -0.123456789012345678;
    return m;
}

std::string serialize(const Model& m) {
    std::ostringstream out(std::ios::binary);
    write_checkpoint(out, m);
    return out.str();
}

Model deserialize(const std::string& bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return read_checkpoint(in);
}

TEST(CheckpointTest, BitExactRoundTripBothModes) {
    for (bool syntactic : {false, true}) {
        const Model m = sample_model(syntactic);
        const Model back = deserialize(serialize(m));
        EXPECT_EQ(back, m);
        EXPECT_EQ(back.params.dims.syntactic, syntactic);
        EXPECT_EQ(serialize(back), serialize(m));
    }
}

TEST(CheckpointTest, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "subseg_checkpoint_test.bin";
    const Model m = sample_model(true);
    save_checkpoint(m, path);
    EXPECT_EQ(load_checkpoint(path), m);
    std::filesystem::remove(path);
}

TEST(CheckpointTest, HeaderLayout) {
    const std::string bytes = serialize(sample_model(true));
    EXPECT_EQ(bytes.substr(0, 8), "SUBSEGCK");
    EXPECT_EQ(bytes[8], 1);  // version, little-endian
    EXPECT_EQ(bytes[12], 1);  // syntactic flag
}

TEST(CheckpointTest, CorruptionIsDetected) {
    std::string bytes = serialize(sample_model(false));
    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(deserialize(bad_magic), DataError);

    std::string bad_version = bytes;
    bad_version[8] = 7;
    EXPECT_THROW(deserialize(bad_version), DataError);

    EXPECT_THROW(deserialize(bytes.substr(0, bytes.size() - 3)), DataError);
    EXPECT_THROW(deserialize(bytes + "x"), DataError);
    EXPECT_THROW(load_checkpoint("/nonexistent/model.ckpt"), DataError);
}

}  // namespace
}  // namespace subseg
