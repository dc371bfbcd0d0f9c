// Bootstraps the single-page client against the HTTP API.

import { ApiClient } from "./api.js";
import { MapView } from "./map.js";
import { PlannerPanel, PreferencePanel, SummaryPanel, TooltipPanel } from "./panels.js";
import { Store } from "./state.js";

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const store = new Store(api);
  const mapView = new MapView(document.getElementById("map")!);

  const resort = await api.resort();
  mapView.render(resort);
  const names = new Map(resort.features.map((f) => [f.properties.id, f.properties.name]));

  const tooltip = new TooltipPanel(document.getElementById("tooltip")!, store);
  new PreferencePanel(document.getElementById("preferences")!, store, names);
  new PlannerPanel(document.getElementById("planner")!, store, mapView);
  new SummaryPanel(document.getElementById("summary")!, store, mapView);

  mapView.onEdgeClick = (edgeId) => {
    store.select(edgeId);
    void tooltip.show(edgeId);
  };

  store.on("rank", () => mapView.applyScores(store.bestMatches));

  const colorMode = document.getElementById("color-mode") as HTMLSelectElement;
  colorMode.addEventListener("change", () =>
    mapView.setColorMode(colorMode.value as "steepness" | "discrepancy"),
  );
  const simpleMode = document.getElementById("simple-mode") as HTMLInputElement;
  simpleMode.addEventListener("change", () => mapView.setSimpleMode(simpleMode.checked));
  const heatToggle = document.getElementById("heatmap-toggle") as HTMLInputElement;
  heatToggle.addEventListener("change", () => {
    if (!heatToggle.checked) {
      mapView.setHeatmap(null);
      return;
    }
    const lons = resort.features.flatMap((f) => f.geometry.coordinates.map((c) => c[0]));
    const lats = resort.features.flatMap((f) => f.geometry.coordinates.map((c) => c[1]));
    mapView.setHeatmap(
      api.heatmapUrl([
        Math.min(...lons),
        Math.min(...lats),
        Math.max(...lons),
        Math.max(...lats),
      ]),
    );
  });

  await store.refreshRank();
}

void boot();
