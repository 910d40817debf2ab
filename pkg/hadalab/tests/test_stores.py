import numpy as np
import pytest
import xarray as xr
import zarr

from hadalab.stores import ReportStore, merge_complex, split_complex


@pytest.fixture(params=["directory", "memory"])
def zobject(request, tmpdir):
    if request.param == "directory":
        return str(tmpdir)
    else:
        return zarr.storage.MemoryStore()


@pytest.fixture
def dataset():
    return xr.Dataset(
        {
            "mass": ("freq", np.array([1.0, -0.5j])),
            "weight": ("freq", np.array([2.0, 3.0]), {"units": "1"}),
        },
        coords={"freq": [1.0, 2.0]},
        attrs={"cutoff": 4.0},
    )


def test_split_complex(dataset):
    ds = split_complex(dataset)

    assert "mass" not in ds
    np.testing.assert_array_equal(ds["mass_re"], [1.0, 0.0])
    np.testing.assert_array_equal(ds["mass_im"], [0.0, -0.5])
    assert ds.attrs["_complex_parts"] == ["mass"]

    xr.testing.assert_identical(merge_complex(ds), dataset)


def test_split_complex_real(dataset):
    real = dataset.drop_vars("mass")
    assert split_complex(real) is real
    assert merge_complex(real) is real


class TestReportStore:
    def test_constructor(self, zobject):
        store = ReportStore(zobject)
        assert not store.in_memory
        assert store.names == []

        default = ReportStore()
        assert default.in_memory

        group = zarr.group(store=zarr.storage.MemoryStore())
        assert ReportStore(group).zgroup is group

    def test_write_open(self, zobject, dataset):
        store = ReportStore(zobject)
        store.write("atoms", dataset)

        assert store.names == ["atoms"]
        actual = store.open("atoms")
        xr.testing.assert_allclose(actual, dataset)
        assert actual.attrs == dataset.attrs

    def test_write_conflict(self, dataset):
        store = ReportStore()
        store.write("atoms", dataset)

        with pytest.raises(ValueError, match="already contains.*atoms"):
            store.write("atoms", dataset)

        store.write("atoms", dataset * 2, overwrite=True)
        np.testing.assert_array_equal(store.open("atoms")["weight"], [4.0, 6.0])

    def test_write_report(self, report):
        store = ReportStore()
        store.write_report("toy", report)

        ds = store.open("toy")
        assert ds.attrs["classification"] == "HadamardType"
        np.testing.assert_array_equal(ds["discrepancy_coeff"], [0.5 + 0j])

    def test_consolidate(self, zobject, dataset):
        store = ReportStore(zobject)
        store.write("atoms", dataset)
        store.consolidate()

        assert store.consolidated
        xr.testing.assert_allclose(store.open("atoms"), dataset)

    def test_open_missing(self):
        with pytest.raises(KeyError, match="no dataset 'nothing'"):
            ReportStore().open("nothing")
