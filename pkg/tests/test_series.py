import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfluct.series import (
    DataError,
    PriceSeries,
    ReturnsSeries,
    load_prices,
    log_prices,
    log_returns,
    write_prices,
)


def _write(tmp_path, text, name="prices.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadPrices:
    def test_basic_two_rows(self, tmp_path):
        from datetime import date
        p = load_prices(_write(tmp_path, "date,price\n2020-01-01,100\n2020-01-02,105\n"))
        assert np.array_equal(p.values, [100.0, 105.0])
        assert p.dates == (date(2020, 1, 1), date(2020, 1, 2))

    def test_zero_price_names_row(self, tmp_path):
        rows = ["date,price"]
        prices = [100, 101, 102, 103, 104, 105, 0, 106]
        for i, v in enumerate(prices):
            rows.append(f"2020-01-{i + 1:02d},{v}")
        with pytest.raises(DataError, match="row 7"):
            load_prices(_write(tmp_path, "\n".join(rows)))

    def test_shuffled_dates_rejected(self, tmp_path):
        text = "date,price\n2020-01-05,100\n2020-01-02,101\n2020-01-03,102\n"
        with pytest.raises(DataError, match="strictly increasing"):
            load_prices(_write(tmp_path, text))

    def test_duplicate_dates_rejected(self, tmp_path):
        text = "date,price\n2020-01-02,100\n2020-01-02,101\n"
        with pytest.raises(DataError, match="strictly increasing"):
            load_prices(_write(tmp_path, text))

    def test_non_numeric_price_names_row(self, tmp_path):
        text = "date,price\n2020-01-01,100\n2020-01-02,oops\n"
        with pytest.raises(DataError, match="row 2"):
            load_prices(_write(tmp_path, text))

    def test_fewer_than_two_rows(self, tmp_path):
        with pytest.raises(DataError):
            load_prices(_write(tmp_path, "date,price\n2020-01-01,100\n"))

    def test_missing_column(self, tmp_path):
        with pytest.raises(DataError, match="price"):
            load_prices(_write(tmp_path, "date,close\n2020-01-01,100\n2020-01-02,101\n"))

    @pytest.mark.parametrize("delim", [";", "\t"])
    def test_delimiter_autodetect(self, tmp_path, delim):
        text = f"date{delim}price\n2020-01-01{delim}100\n2020-01-02{delim}105\n"
        p = load_prices(_write(tmp_path, text))
        assert np.array_equal(p.values, [100.0, 105.0])

    def test_no_dates_mode(self, tmp_path):
        p = load_prices(_write(tmp_path, "index,price\n0,100\n1,105\n"), no_dates=True)
        assert p.dates is None
        assert np.array_equal(p.values, [100.0, 105.0])

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="does not exist"):
            load_prices(tmp_path / "nope.csv")

    def test_roundtrip_identity(self, tmp_path):
        # load o write is the identity on values
        vals = [100.0, 100.37, 99.2101, 101.0000001, 250.5]
        from datetime import date
        dates = tuple(date(2021, 1, d) for d in (4, 5, 6, 7, 8))
        p = PriceSeries(values=np.asarray(vals), dates=dates)
        path = write_prices(p, tmp_path / "echo.csv")
        q = load_prices(path)
        assert np.array_equal(q.values, p.values)
        assert q.dates == p.dates


class TestLogPrices:
    def test_ones(self):
        p = PriceSeries(values=np.array([1.0, 1.0, 1.0]))
        assert np.array_equal(log_prices(p), [0.0, 0.0, 0.0])

    def test_exponentials(self):
        p = PriceSeries(values=np.array([math.e, math.e**2]))
        assert np.allclose(log_prices(p), [1.0, 2.0], rtol=0, atol=1e-15)

    def test_against_arbitrary_precision(self):
        # mpmath is the independent high-precision oracle for ln
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40
        p = PriceSeries(values=np.array([100.0, 105.0]))
        expect = [float(mp.log(100)), float(mp.log(105))]
        assert np.allclose(log_prices(p), expect, rtol=0, atol=1e-14)
        assert abs(log_prices(p)[0] - 4.60517) < 1e-5
        assert abs(log_prices(p)[1] - 4.65396) < 1e-5


class TestLogReturns:
    def test_constant_prices(self):
        p = PriceSeries(values=np.array([100.0, 100.0, 100.0]))
        r = log_returns(p, 1)
        assert np.array_equal(r.values, [0.0, 0.0])
        assert r.scale_s == 1

    def test_exact_exponential_trend(self):
        t = np.arange(6)
        p = PriceSeries(values=np.exp(0.01 * t))
        r = log_returns(p, 1)
        assert r.values.shape == (5,)
        assert np.allclose(r.values, 0.01, rtol=0, atol=1e-12)

    def test_single_return_oracle(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40
        p = PriceSeries(values=np.array([100.0, 105.0]))
        r = log_returns(p, 1)
        assert abs(r.values[0] - float(mp.log(mp.mpf(105) / 100))) < 1e-15
        assert abs(r.values[0] - 0.048790) < 1e-6

    def test_scale_too_large(self):
        p = PriceSeries(values=np.array([1.0, 2.0, 3.0]))
        with pytest.raises(DataError):
            log_returns(p, 3)

    def test_length_contract(self):
        p = PriceSeries(values=np.linspace(10, 20, 50))
        for s in (1, 2, 7):
            assert len(log_returns(p, s)) == 50 - s


@st.composite
def price_arrays(draw, min_len=4, max_len=60):
    n = draw(st.integers(min_len, max_len))
    vals = draw(st.lists(st.floats(0.5, 2000.0), min_size=n, max_size=n))
    return np.asarray(vals)


class TestProperties:
    @given(prices=price_arrays(min_len=6), s=st.integers(2, 4))
    @settings(max_examples=60, deadline=None)
    def test_telescoping_identity(self, prices, s):
        # an s-day return is the sum of the s one-day returns it spans
        p = PriceSeries(values=prices)
        rs = log_returns(p, s).values
        r1 = log_returns(p, 1).values
        summed = np.array([r1[t:t + s].sum() for t in range(len(prices) - s)])
        scale = np.maximum(np.abs(rs), 1.0)
        assert np.all(np.abs(rs - summed) <= 1e-12 * scale)

    @given(prices=price_arrays(), c=st.floats(0.01, 100.0))
    @settings(max_examples=60, deadline=None)
    def test_price_rescaling_invariance(self, prices, c):
        p = PriceSeries(values=prices)
        q = PriceSeries(values=c * prices)
        a, b = log_returns(p, 1).values, log_returns(q, 1).values
        assert np.all(np.abs(a - b) <= 1e-12 * np.maximum(np.abs(a), 1.0))


class TestInvariants:
    def test_prices_must_be_positive_finite(self):
        with pytest.raises(DataError):
            PriceSeries(values=np.array([1.0, -2.0]))
        with pytest.raises(DataError):
            PriceSeries(values=np.array([1.0, math.inf]))
        with pytest.raises(DataError):
            PriceSeries(values=np.array([1.0, math.nan]))

    def test_returns_reject_nonfinite(self):
        with pytest.raises(DataError):
            ReturnsSeries(values=np.array([0.1, math.nan]), scale_s=1)

    def test_source_dates_length_checked(self):
        from datetime import date
        with pytest.raises(DataError):
            ReturnsSeries(values=np.zeros(3), scale_s=1,
                          source_dates=(date(2020, 1, 1),))
