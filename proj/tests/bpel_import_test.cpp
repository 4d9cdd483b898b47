#include <gtest/gtest.h>

#include <set>

#include "chorsem/bpel_import.hpp"
#include "chorsem/dsl.hpp"
#include "chorsem/explorer.hpp"
#include "support/bpel_rows.hpp"
#include "support/files.hpp"

namespace chorsem::testing {
void PrintTo(const RowSnippet& s, std::ostream* os) { *os << s.row; }
}  // namespace chorsem::testing

using namespace chorsem;
using namespace chorsem::testing;

namespace {

class Row : public ::testing::TestWithParam<RowSnippet> {};

template <typename E>
std::string rejection(const std::string& body) {
  try {
    import_snippet(body);
  } catch (const E& e) {
    return e.what();
  } catch (const std::exception& e) {
    return std::string("wrong exception: ") + e.what();
  }
  return "accepted";
}

}  // namespace

TEST_P(Row, ImportsAsExpected) {
  EXPECT_EQ(check_row(GetParam()), "");
}

INSTANTIATE_TEST_SUITE_P(Conversion, Row, ::testing::ValuesIn(row_snippets()),
                         [](const auto& info) { return info.param.row; });

TEST(Rows, EveryConversionRowHasASnippet) {
  std::set<std::string> covered;
  for (const auto& s : row_snippets()) covered.insert(s.row);
  for (const auto& row : conversion_rows())
    EXPECT_TRUE(covered.count(row)) << row;
  EXPECT_EQ(conversion_rows().size(), 19u);
}

TEST(Import, WaitFor) {
  ChoreographyDef def = import_snippet("<wait><for>5</for></wait>");
  EXPECT_EQ(def.orchestrators[0].main, Activity::wait(5));
}

TEST(Import, InvokeWithOutputWaitsForReply) {
  ChoreographyDef def = import_snippet(
      "<invoke partnerLink=\"pl\" operation=\"op1\" inputVariable=\"a\" "
      "outputVariable=\"b\"/>");
  EXPECT_EQ(def.orchestrators[0].main,
            parse_activity("invoke(pl,op1,a); replybar(pl,b)"));
}

TEST(Import, RecordsMatchedRows) {
  std::set<std::string> rows;
  import_snippet("<sequence><wait><for>1</for></wait><exit/></sequence>", &rows);
  EXPECT_TRUE(rows.count("sequence"));
  EXPECT_TRUE(rows.count("wait"));
  EXPECT_TRUE(rows.count("exit"));
  EXPECT_FALSE(rows.count("flow"));
}

TEST(Import, CompensationIsRejected) {
  std::string msg = rejection<UnsupportedElement>("<compensate/>");
  EXPECT_NE(msg.find("unsupported element <compensate>"), std::string::npos) << msg;
  msg = rejection<UnsupportedElement>("<scope><empty/></scope>");
  EXPECT_NE(msg.find("<scope>"), std::string::npos) << msg;
}

TEST(Import, NotifyIsRejectedWithReason) {
  std::string msg = rejection<UnsupportedElement>("<wsnt:Notify/>");
  EXPECT_NE(msg.find("runtime effect"), std::string::npos) << msg;
}

TEST(Import, MissingBindings) {
  std::string msg = rejection<MissingBinding>(
      "<receive partnerLink=\"nope\" operation=\"op1\" variable=\"a\"/>");
  EXPECT_NE(msg.find("partnerLink 'nope'"), std::string::npos) << msg;
  msg = rejection<MissingBinding>(
      "<receive partnerLink=\"pl\" operation=\"nope\" variable=\"a\"/>");
  EXPECT_NE(msg.find("operation 'nope'"), std::string::npos) << msg;
  msg = rejection<MissingBinding>(
      "<invoke partnerLink=\"nofac\" operation=\"CreateResource\"/>");
  EXPECT_NE(msg.find("missing binding"), std::string::npos) << msg;
}

TEST(Import, MalformedXmlReportsLine) {
  std::string msg = rejection<ImportError>("<sequence>\n<empty/>\n</wrong>");
  EXPECT_NE(msg.find("line"), std::string::npos) << msg;
}

TEST(Bindings, MalformedJsonIsRejected) {
  EXPECT_THROW(parse_bindings("{"), ImportError);
  EXPECT_THROW(parse_bindings(R"({"partnerLinks": 3})"), ImportError);
}

TEST(Bindings, DefaultsApply) {
  Bindings b = parse_bindings("{}");
  EXPECT_EQ(b.choreography, "imported");
  EXPECT_EQ(b.namespaces, default_namespaces());
  EXPECT_EQ(b.config, ChorConfig{});
}

TEST(Import, Example1MatchesHandModel) {
  ChoreographyDef imported = import_fixture("example1");
  ChoreographyDef hand = load_fixture("example1.brf");
  EXPECT_EQ(imported, hand) << print_model(imported);
}

TEST(Import, AuctionMatchesHandModelBehaviour) {
  ChoreographyDef imported = import_fixture("auction");
  EXPECT_FALSE(has_errors(validate_model(imported)));
  ChoreographyDef hand = load_fixture("auction.brf");
  Lts a = explore(parse_model(print_model(imported)));
  Lts b = explore(hand);
  ASSERT_FALSE(a.limits_hit);
  std::set<std::string> ka(a.keys.begin(), a.keys.end());
  std::set<std::string> kb(b.keys.begin(), b.keys.end());
  EXPECT_EQ(ka, kb);
  EXPECT_EQ(a.edges.size(), b.edges.size());
}
