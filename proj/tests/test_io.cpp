#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "solid/io.hpp"

using namespace solid;

TEST(WeightSpec, ParsesEveryFamily) {
  EXPECT_EQ(io::parse_weight("expdisc:a=1,b=1,w=one").describe(), "expdisc:a=1,b=1,w=one");
  EXPECT_EQ(io::parse_weight("expdisc:a=1,b=2").describe(), "expdisc:a=1,b=2,w=one");
  EXPECT_EQ(io::parse_weight("expdisc2:a=1,b=2").describe(), "expdisc2:a=1,b=2");
  EXPECT_EQ(io::parse_weight("std:alpha=2").describe(), "std:alpha=2");
  EXPECT_EQ(io::parse_weight("std:alpha=2,form=sq").describe(), "std:alpha=2,form=sq");
  EXPECT_EQ(io::parse_weight("expplane:p=1").describe(), "expplane:p=1");
  EXPECT_EQ(io::parse_weight("expexp").describe(), "expexp");
  EXPECT_EQ(io::parse_weight("logsq").describe(), "logsq");
}

TEST(WeightSpec, CaseInsensitiveKeysAndValues) {
  EXPECT_EQ(io::parse_weight("ExpDisc:A=0.5,B=1.5,W=InvLog").describe(), "expdisc:a=0.5,b=1.5,w=invlog");
  EXPECT_EQ(io::parse_weight("STD:Alpha=1e-1").describe(), "std:alpha=0.1");
}

TEST(WeightSpec, DescribeRoundTrips) {
  for (const char* s : {"expdisc:a=0.3,b=2.75,w=explogsq", "expdisc:a=1,b=1,w=oneminusr", "expplane:p=0.25",
                        "std:alpha=0,form=sq"}) {
    const RadialWeight w = io::parse_weight(s);
    EXPECT_EQ(io::parse_weight(w.describe()).describe(), w.describe());
  }
}

TEST(WeightSpec, ErrorsCarryPositions) {
  auto position = [](const std::string& s) -> long long {
    try {
      io::parse_weight(s);
    } catch (const parse_error& e) {
      return static_cast<long long>(e.position());
    }
    return -1;
  };
  EXPECT_EQ(position("expdisc:a=1,b=x"), 14);
  EXPECT_EQ(position("expdisc:a=1,b=1,w=two"), 18);
  EXPECT_EQ(position("nosuch:a=1"), 0);
  EXPECT_EQ(position("expplane:q=1"), 9);
  EXPECT_EQ(position("expdisc:a=1,a=2,b=1"), 12);
  EXPECT_GE(position("expdisc:a=1"), 0);
  EXPECT_GE(position("expdisc:a=-1,b=1"), 0);
  EXPECT_GE(position("std:alpha"), 0);
  EXPECT_GE(position("std:alpha=1.5x"), 0);
}

TEST(Ranges, ParseRangesAndLists) {
  const io::IntRange r = io::parse_range("10..200");
  EXPECT_EQ(r.first, 10);
  EXPECT_EQ(r.last, 200);
  EXPECT_EQ(io::parse_range("7").last, 7);
  EXPECT_THROW(io::parse_range("5..2"), parse_error);
  EXPECT_EQ(io::parse_real_list("1..3").size(), 3u);
  EXPECT_EQ(io::parse_real_list("1.5,2,1e3")[2], 1000.0);
  EXPECT_EQ(io::parse_int_list("3,9,27")[1], 9);
  EXPECT_THROW(io::parse_int_list("3,x"), parse_error);
}

TEST(Json, DeterministicFloatsAndSentinels) {
  const io::Json j{{"a", 1.5}, {"b", -INFINITY}, {"c", INFINITY}, {"d", NAN}, {"e", 3}, {"f", "x"}};
  EXPECT_EQ(io::dump(j, 0), R"({"a":1.500000000000e+00,"b":"-inf","c":"inf","d":"nan","e":3,"f":"x"})");
  EXPECT_EQ(io::dump(j), io::dump(j));
  EXPECT_EQ(io::json_real(io::Json("-inf")), -INFINITY);
}

TEST(Json, NormReportShape) {
  NormReport r;
  EXPECT_EQ(io::dump(io::to_json(r), 0), R"({"blocks":[],"log_sup":"-inf","attained_n":null})");
  r.blocks = {{3, -2.0}};
  r.log_sup = -2.0;
  r.attained_n = 3;
  EXPECT_EQ(io::dump(io::to_json(r), 0),
            R"({"blocks":[{"n":3,"log_value":-2.000000000000e+00}],"log_sup":-2.000000000000e+00,"attained_n":3})");
}

TEST(Coefficients, TextFormat) {
  const CoeffSeq c = io::parse_coeffs("# comment\n3\t2.5\n\n1\tlog:-4\n7 0\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.terms()[0].m, 1);
  EXPECT_EQ(c.terms()[0].log_mag, -4.0);
  EXPECT_NEAR(c.terms()[1].log_mag, std::log(2.5), 1e-15);
  EXPECT_EQ(io::parse_coeffs(io::coeffs_text(c)), c);
}

TEST(Coefficients, JsonFormat) {
  const CoeffSeq c = io::parse_coeffs(R"([{"m": 5, "log_mag": -1.25}, {"m": 2, "log_mag": "-inf"}])");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.terms()[0].m, 5);
}

TEST(Coefficients, Errors) {
  EXPECT_THROW(io::parse_coeffs("3\n"), parse_error);
  EXPECT_THROW(io::parse_coeffs("3\t-1\n"), parse_error);
  EXPECT_THROW(io::parse_coeffs("x\t1\n"), parse_error);
  EXPECT_THROW(io::parse_coeffs("3\t1\n3\t2\n"), parse_error);
  EXPECT_THROW(io::parse_coeffs("[{\"m\": 1}]"), parse_error);
  EXPECT_THROW(io::parse_coeffs("[{"), parse_error);
  try {
    io::parse_coeffs("1\t1\n2\tlog:z\n");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.position(), 10u);
  }
}

TEST(Partitions, JsonAndCsvRoundTrip) {
  const RadialWeight w{family::ExpDisc{1, 1, wfactor::One{}}};
  const BlockPartition p = theorem41_partition(w, 2, 6);
  for (const std::string& text : {io::dump(io::to_json(p)), io::partition_csv(p)}) {
    const BlockPartition q = io::parse_partition(text);
    EXPECT_EQ(q.source, PartitionSource::UserSupplied);
    ASSERT_EQ(q.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(q.entries[i].n, p.entries[i].n);
      EXPECT_NEAR(q.entries[i].m, p.entries[i].m, 1e-11 * p.entries[i].m);
      EXPECT_NEAR(q.entries[i].log_v, p.entries[i].log_v, 1e-11 * std::abs(p.entries[i].log_v));
    }
  }
}

TEST(Partitions, RejectsMalformedFiles) {
  EXPECT_THROW(io::parse_partition("n,m\n1,2\n"), parse_error);
  EXPECT_THROW(io::parse_partition("n,m_n,r_mn,log_v_at_rmn\n1,2,0.5\n"), parse_error);
  EXPECT_THROW(io::parse_partition("[]"), parse_error);
  EXPECT_THROW(io::parse_partition(R"([{"n":1,"m_n":5,"r_mn":0.5}])"), parse_error);
  EXPECT_THROW(io::parse_partition("n,m_n,r_mn,log_v_at_rmn\n1,5,0.5,-1\n2,4,0.6,-2\n"), validation_error);
}
