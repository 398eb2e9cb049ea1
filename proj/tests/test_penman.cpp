#include <gtest/gtest.h>

#include "amrnorm/tree.hpp"
#include "amrnorm/validate.hpp"
#include "support.hpp"

using namespace amrnorm;

namespace {

const Node& child(const Node& n, std::size_t i) { return *std::get<Box<Node>>(n.branches.at(i).target); }

bool has_code(const std::vector<Diagnostic>& ds, DiagnosticCode code) {
  for (const auto& d : ds)
    if (d.code == code) return true;
  return false;
}

}  // namespace

TEST(Parse, NestedNodesAndConstants) {
  Tree t = parse("(d / drive-01 :ARG0 (h / he) :manner (c / care-04 :polarity -))");
  EXPECT_EQ(t.root_variable(), "d");
  EXPECT_EQ(t.root.label, "drive-01");
  ASSERT_EQ(t.root.branches.size(), 2u);
  EXPECT_EQ(t.root.branches[0].role, ":ARG0");
  EXPECT_EQ(child(t.root, 0).label, "he");
  const Node& care = child(t.root, 1);
  ASSERT_EQ(care.branches.size(), 1u);
  EXPECT_EQ(std::get<Constant>(care.branches[0].target).value, "-");
}

TEST(Parse, ReusedVariableBecomesReference) {
  Tree t = parse("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))");
  const Node& go = child(t.root, 1);
  ASSERT_TRUE(std::holds_alternative<VariableRef>(go.branches[0].target));
  EXPECT_EQ(std::get<VariableRef>(go.branches[0].target).variable, "b");
}

TEST(Parse, ReferenceBeforeDefinition) {
  Tree t = parse("(b / bite-01 :ARG0 d :ARG1 (b2 / boy :ARG1-of (c / chase-01 :ARG0 (d / dog))))");
  EXPECT_TRUE(std::holds_alternative<VariableRef>(t.root.branches[0].target));
}

TEST(Parse, UndefinedSymbolIsConstant) {
  Tree t = parse("(s / see-01 :mode imperative :ARG1 x)");
  EXPECT_TRUE(std::holds_alternative<Constant>(t.root.branches[0].target));
  EXPECT_TRUE(std::holds_alternative<Constant>(t.root.branches[1].target));
}

TEST(Parse, QuotedStringsKeepQuotesAndEscapes) {
  Tree t = parse(R"x((s / say-01 :ARG1 "the \"stars\" (all)" :op1 "a b"))x");
  EXPECT_EQ(std::get<Constant>(t.root.branches[0].target).value, R"x("the \"stars\" (all)")x");
  EXPECT_EQ(std::get<Constant>(t.root.branches[1].target).value, "\"a b\"");
}

TEST(Parse, QuotedStringIsNeverAVariable) {
  Tree t = parse(R"x((b / boy :name "b"))x");
  EXPECT_TRUE(std::holds_alternative<Constant>(t.root.branches[0].target));
}

TEST(Parse, WhitespaceIsInsignificant) {
  EXPECT_EQ(parse("(a/apple :quant 5)"), parse("(a / apple\n   :quant   5 )"));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("(a apple)"), ParseError);
  EXPECT_THROW(parse("(a / apple"), ParseError);
  EXPECT_THROW(parse("(a / apple))"), ParseError);
  EXPECT_THROW(parse("(a / apple :quant)"), ParseError);
  EXPECT_THROW(parse("(a / apple : 5)"), ParseError);
  EXPECT_THROW(parse("(a / apple) (b / boy)"), ParseError);
  EXPECT_THROW(parse(R"x((a / apple :name "open))x"), ParseError);
}

TEST(Parse, ErrorPosition) {
  try {
    parse("(a / apple\n   :quant 5\n   :mod (b)");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Serialize, IndentedAndSingleLine) {
  Tree t = parse("(d / drive-01 :ARG0 (h / he) :manner (c / care-04 :polarity -))");
  EXPECT_EQ(serialize(t), "(d / drive-01\n   :ARG0 (h / he)\n   :manner (c / care-04\n      :polarity -))");
  EXPECT_EQ(serialize(t, -1), "(d / drive-01 :ARG0 (h / he) :manner (c / care-04 :polarity -))");
  EXPECT_EQ(serialize(t, 2), "(d / drive-01\n  :ARG0 (h / he)\n  :manner (c / care-04\n    :polarity -))");
}

TEST(Serialize, RoundtripPreservesTree) {
  for (const auto& entry : testing_support::fixtures()) {
    EXPECT_EQ(parse(serialize(entry.tree)), entry.tree) << serialize(entry.tree);
    EXPECT_EQ(parse(serialize(entry.tree, -1)), entry.tree);
  }
}

TEST(Validate, CleanTree) {
  EXPECT_TRUE(validate(parse("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))")).empty());
}

TEST(Validate, ConstantSourcedInversion) {
  auto ds = validate(parse(R"x((p / prince :mod-of "x"))x"));
  EXPECT_TRUE(has_errors(ds));
  EXPECT_TRUE(has_code(ds, DiagnosticCode::ConstantSourcedRelation));
  EXPECT_TRUE(has_code(ds, DiagnosticCode::NonCanonicalRole));
}

TEST(Validate, NonCanonicalRolesAreWarnings) {
  for (const char* text : {"(p / pile :consist (s / stone))", "(p / planet :mod-of (s / small))",
                           "(p / prince :domain-of (l / little))", "(a / act :prep-on-behalf (b / boy))",
                           "(a / act :prep-out (b / box))"}) {
    auto ds = validate(parse(text));
    ASSERT_EQ(ds.size(), 1u) << text;
    EXPECT_EQ(ds[0].severity, Severity::Warning);
    EXPECT_EQ(ds[0].code, DiagnosticCode::NonCanonicalRole);
  }
  EXPECT_TRUE(validate(parse("(c / crowd :consist-of (p / person))")).empty());
}

TEST(Validate, DuplicateDefinition) {
  auto ds = validate(parse("(b / bite-01 :ARG0 (d / dog) :ARG1 (b / boy))"));
  EXPECT_TRUE(has_code(ds, DiagnosticCode::DuplicateDefinition));
}

TEST(Validate, Cycle) {
  auto ds = validate(parse("(a / a1 :ARG0 (b / b1 :ARG0 a))"));
  EXPECT_TRUE(has_code(ds, DiagnosticCode::Cycle));
  EXPECT_FALSE(has_errors(validate(parse("(a / a1 :ARG0 (b / b1 :ARG0-of a))"))));
}

TEST(Validate, FixturesHaveNoErrors) {
  for (const auto& entry : testing_support::fixtures()) EXPECT_FALSE(has_errors(validate(entry.tree)));
}

TEST(Roles, Inversion) {
  EXPECT_TRUE(is_inverted(":ARG0-of"));
  EXPECT_FALSE(is_inverted(":ARG0"));
  EXPECT_FALSE(is_inverted(":consist-of"));
  EXPECT_FALSE(is_inverted(":prep-on-behalf-of"));
  EXPECT_FALSE(is_inverted(":prep-out-of"));
  EXPECT_TRUE(is_inverted(":consist-of-of"));
  EXPECT_EQ(deinvert(":ARG1-of"), ":ARG1");
  EXPECT_EQ(deinvert(":consist-of-of"), ":consist-of");
  EXPECT_EQ(invert(":consist-of"), ":consist-of-of");
  EXPECT_EQ(role_name(":ARG0"), "ARG0");
}
