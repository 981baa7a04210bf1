#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "subseg/error.hpp"
#include "subseg/random.hpp"
#include "subseg/syntax.hpp"

namespace subseg {
namespace {

std::string row(int id, const std::string& form, const std::string& upos, const std::string& dep) {
    return std::to_string(id) + "\t" + form + "\t_\t" + upos + "\t_\t_\t0\t" + dep + "\t_\t_\n";
}

AnnotationFile parse(const std::string& text) {
    std::istringstream in(text);
    return parse_annotations(in, "test.conllu");
}

TEST(LoadAnnotationsTest, ExtractsColumns) {
    const auto file = parse(row(1, "okay", "INTJ", "discourse"));
    ASSERT_EQ(file.token_count(), 1u);
    EXPECT_EQ(file.sentences[0][0], (AnnotationRow{"okay", "INTJ", "discourse"}));
}

TEST(LoadAnnotationsTest, SentencesAndComments) {
    const std::string text = "# sent_id = 1\n" + row(1, "a", "DET", "det") + row(2, "b", "NOUN", "root") +
                             row(3, "c", "VERB", "x") + "\n# text = d e f\n" + row(1, "d", "X", "y") +
                             row(2, "e", "X", "y") + row(3, "f", "X", "y") + "\n";
    const auto file = parse(text);
    EXPECT_EQ(file.sentences.size(), 2u);
    EXPECT_EQ(file.token_count(), 6u);
}

TEST(LoadAnnotationsTest, SkipsRangesAndEmptyNodes) {
    const std::string text = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n" + row(1, "do", "AUX", "aux") +
                             row(2, "n't", "PART", "advmod") + "2.1\tx\t_\t_\t_\t_\t_\t_\t_\t_\n";
    EXPECT_EQ(parse(text).token_count(), 2u);
}

TEST(LoadAnnotationsTest, UnderscoreTagsAreUnknown) {
    const auto file = parse(row(1, "a", "_", "_"));
    EXPECT_TRUE(file.sentences[0][0].upos.empty());
}

TEST(LoadAnnotationsTest, MalformedRowNamesLine) {
    try {
        parse(row(1, "a", "X", "y") + "2\tb\tX\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("test.conllu:2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse("x\ta\t_\tX\t_\t_\t0\ty\t_\t_\n"), DataError);
    EXPECT_THROW(load_annotations("/nonexistent/file.conllu"), DataError);
}

AnnotationFile tagged(const TokenList& forms) {
    AnnotationFile file;
    file.sentences.emplace_back();
    for (std::size_t i = 0; i < forms.size(); ++i) {
        file.sentences[0].push_back(AnnotationRow{forms[i], "P" + std::to_string(i), "D" + std::to_string(i)});
    }
    return file;
}

TEST(AlignTest, IdenticalSequences) {
    const TokenList tokens{"a", "b", "c"};
    for (auto mode : {AlignMode::strict, AlignMode::lenient}) {
        const auto out = align(tokens, tagged({"A", "b", "c"}), mode);
        ASSERT_EQ(out.size(), 3u);
        EXPECT_EQ(out[0].pos, "P0");
        EXPECT_EQ(out[2].dep, "D2");
    }
}

TEST(AlignTest, StrictMismatchNamesIndex) {
    try {
        align({"a", "b", "c"}, tagged({"a", "x", "c"}), AlignMode::strict);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("token 1"), std::string::npos) << e.what();
    }
    EXPECT_THROW(align({"a", "b"}, tagged({"a"}), AlignMode::strict), DataError);
}

TEST(AlignTest, LenientMissingToken) {
    const auto out = align({"a", "b", "c", "d"}, tagged({"a", "c", "d"}), AlignMode::lenient);
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(out[0].pos, "P0");
    EXPECT_TRUE(out[1].pos.empty());
    EXPECT_EQ(out[2].pos, "P1");
    EXPECT_EQ(out[3].pos, "P2");
}

TEST(AlignTest, LenientExtraAnnotationRows) {
    const auto out = align({"can't", "go"}, tagged({"ca", "n't", "go"}), AlignMode::lenient);
    EXPECT_TRUE(out[0].pos.empty());
    EXPECT_EQ(out[1].pos, "P2");
}

TEST(AlignTest, OutputLengthAlwaysMatchesTokens) {
    EXPECT_EQ(align({"a", "b"}, tagged({}), AlignMode::lenient).size(), 2u);
    EXPECT_TRUE(align({}, tagged({"a"}), AlignMode::lenient).empty());
}

TEST(AlignTest, FuzzedDeletionsMatchDynamicProgrammingOracle) {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        TokenList tokens;
        for (int i = 0; i < 1000; ++i) {
            tokens.push_back("w" + std::to_string(uniform_index(rng, 30)));
        }
        TokenList kept;
        for (const auto& t : tokens) {
            if (uniform_index(rng, 100) >= 8) {
                kept.push_back(t);
            }
        }
        std::vector<AnnotationRow> rows;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            rows.push_back(AnnotationRow{kept[i], "P" + std::to_string(i), "D"});
        }
        EXPECT_EQ(alignment_map(tokens, rows, AlignMode::lenient), oracle::align(tokens, kept));
    }
}

TEST(AlignTest, FuzzedEditsMatchDynamicProgrammingOracle) {
    Rng rng(78);
    for (int trial = 0; trial < 30; ++trial) {
        TokenList tokens, edited;
        const auto n = 50 + uniform_index(rng, 400);
        for (std::size_t i = 0; i < n; ++i) {
            tokens.push_back("w" + std::to_string(uniform_index(rng, 12)));
        }
        for (const auto& t : tokens) {
            const auto roll = uniform_index(rng, 100);
            if (roll < 5) {
                continue;
            }
            if (roll < 10) {
                edited.push_back("other");
            }
            if (roll < 13) {
                edited.push_back("inserted");
            }
            edited.push_back(t);
        }
        std::vector<AnnotationRow> rows;
        for (const auto& e : edited) {
            rows.push_back(AnnotationRow{e, "P", "D"});
        }
        EXPECT_EQ(alignment_map(tokens, rows, AlignMode::lenient), oracle::align(tokens, edited));
    }
}

TEST(NullAnnotateTest, AllUnknown) {
    const auto out = null_annotate({"a", "b"});
    ASSERT_EQ(out.size(), 2u);
    EXPECT_TRUE(out[0].pos.empty() && out[0].dep.empty() && out[1].pos.empty());
    EXPECT_TRUE(null_annotate({}).empty());
}

TEST(DirectoryAnnotatorTest, AnnotatesAcrossSegmentBoundaries) {
    const auto dir = std::filesystem::temp_directory_path() / "subseg_annotator_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "d1.conllu") << "1\tHello\thello\tINTJ\t_\t_\t0\troot\t_\t_\n"
                                        "2\tthere\tthere\tADV\t_\t_\t1\tadvmod\t_\t_\n\n"
                                        "1\tBye\tbye\tINTJ\t_\t_\t0\troot\t_\t_\n";
    const auto annotate = directory_annotator(dir, AlignMode::strict);
    const auto out = annotate(RawDocument{"d1", {}}, SegmentList{{"hello"}, {"there", "bye"}});
    ASSERT_EQ(out.size(), 2u);
    ASSERT_EQ(out[1].size(), 2u);
    EXPECT_EQ(out[0][0].pos, "INTJ");
    EXPECT_EQ(out[1][0].dep, "advmod");
    EXPECT_EQ(out[1][1].pos, "INTJ");
    EXPECT_THROW(annotate(RawDocument{"missing", {}}, SegmentList{{"x"}}), DataError);
    EXPECT_THROW(annotate(RawDocument{"d1", {}}, SegmentList{{"hello", "world"}}), DataError);
    std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace subseg
