from collections.abc import MutableMapping
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np
import xarray as xr
import zarr


_COMPLEX_KEY = "_complex_parts"


def ensure_no_dataset_conflict(zgroup, znames: Iterable[str]):
    existing_datasets = [name for name in znames if name in zgroup]

    if existing_datasets:
        raise ValueError(
            f"Zarr path {zgroup.path or '/'} already contains the following datasets: "
            + ",".join(existing_datasets)
        )


def split_complex(dataset: xr.Dataset) -> xr.Dataset:
    """Replace each complex variable ``v`` by ``v_re`` and ``v_im``."""
    parts = {}
    complex_names = []

    for name, da in dataset.data_vars.items():
        if np.iscomplexobj(da.values):
            parts[f"{name}_re"] = da.real.assign_attrs(da.attrs)
            parts[f"{name}_im"] = da.imag.assign_attrs(da.attrs)
            complex_names.append(name)

    if not complex_names:
        return dataset

    ds = dataset.drop_vars(complex_names).assign(parts)
    ds.attrs[_COMPLEX_KEY] = complex_names
    return ds


def merge_complex(dataset: xr.Dataset) -> xr.Dataset:
    """Inverse of :func:`split_complex`."""
    complex_names = list(dataset.attrs.get(_COMPLEX_KEY, []))
    if not complex_names:
        return dataset

    merged = {}
    for name in complex_names:
        re = dataset[f"{name}_re"]
        merged[name] = (re + 1j * dataset[f"{name}_im"]).assign_attrs(re.attrs)

    drop = [f"{name}_{part}" for name in complex_names for part in ("re", "im")]
    ds = dataset.drop_vars(drop).assign(merged)
    ds.attrs = {k: v for k, v in dataset.attrs.items() if k != _COMPLEX_KEY}
    return ds


class ReportStore:
    """Collection of analysis datasets kept in a zarr group.

    Parameters
    ----------
    zobject : :class:`zarr.Group` or mutable mapping or str, optional
        Zarr group, store or path. An in-memory store is used by default.

    """

    def __init__(self, zobject: Optional[Union[zarr.Group, MutableMapping, str]] = None):
        self.in_memory = False
        self.consolidated = False

        if isinstance(zobject, zarr.Group):
            self.zgroup = zobject
        elif zobject is None:
            self.zgroup = zarr.group(store=zarr.storage.MemoryStore())
            self.in_memory = True
        else:
            self.zgroup = zarr.group(store=zobject)

    def _path(self, name: str) -> str:
        if self.zgroup.path:
            return f"{self.zgroup.path}/{name}"
        return name

    @property
    def names(self) -> List[str]:
        return sorted(self.zgroup.group_keys())

    def write(self, name: str, dataset: xr.Dataset, overwrite: bool = False):
        """Write ``dataset`` under ``name``; existing names are refused
        unless ``overwrite`` is True.
        """
        if not overwrite:
            ensure_no_dataset_conflict(self.zgroup, [name])

        ds = split_complex(dataset)
        ds.to_zarr(self.zgroup.store, group=self._path(name), mode="w")

        # reset consolidated since metadata has just been updated
        self.consolidated = False

    def write_report(self, name: str, report, overwrite: bool = False):
        self.write(name, report.to_dataset(), overwrite=overwrite)

    def consolidate(self):
        zarr.consolidate_metadata(self.zgroup.store)
        self.consolidated = True

    def open(self, name: str, decoding: Optional[Dict[str, Any]] = None) -> xr.Dataset:
        if name not in self.zgroup:
            raise KeyError(f"no dataset {name!r} in store (found {self.names})")

        open_kwargs = dict(decoding or {})
        open_kwargs.update(
            {
                "chunks": None if self.in_memory else "auto",
                "group": self._path(name),
                "consolidated": self.consolidated,
            }
        )

        ds = xr.open_zarr(self.zgroup.store, **open_kwargs)

        if self.in_memory:
            # lazy loading may be confusing for the default, in-memory option
            ds.load()
        else:
            for da in ds.data_vars.values():
                if not da.dims:
                    da.load()

        return merge_complex(ds)
