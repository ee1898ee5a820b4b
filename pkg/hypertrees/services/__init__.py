# Services module for hypertree spectra
