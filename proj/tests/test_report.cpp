#include "doctest.h"

#include <cmath>

#include "cokinetic/report.hpp"

using namespace cokinetic;

TEST_CASE("checks and aggregation") {
    VerificationReport r("demo");
    CHECK(r.check_le("a", 1.0, 1.0));
    CHECK_FALSE(r.check_lt("b", 1.0, 1.0));
    CHECK(r.check_ge("c", 2.0, 1.0));
    CHECK_FALSE(r.check_le("nan", std::nan(""), 1.0));
    CHECK(r.flag("ok", true));
    CHECK_FALSE(r.pass());
    CHECK(r.failures() == 2);
    CHECK(r.max_value("a") == 1.0);
    CHECK(r.max_value("missing") == 0.0);

    VerificationReport outer("outer");
    VerificationReport sub("sub");
    sub.check_le("x", 0.5, 1.0, "unit");
    outer.absorb(sub);
    REQUIRE(outer.checks().size() == 1u);
    CHECK(outer.checks()[0].name == "sub/x");
    CHECK(outer.pass());
}

TEST_CASE("serialization") {
    VerificationReport r("demo");
    r.check_le("a", 0.25, 1.0, "spec");
    r.data()["note"] = "x";
    const Json j = r.to_json();
    CHECK(j["name"] == "demo");
    CHECK(j["pass"] == true);
    CHECK(j["checks"][0]["bound"] == 1.0);
    const std::string csv = r.to_csv();
    CHECK(csv.rfind("name,value,bound,relation,pass,tolerance_source\n", 0) == 0);
    CHECK(csv.find("a,0.25,1,<=,1,spec") != std::string::npos);
}
