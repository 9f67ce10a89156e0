/**
 * Minimal virtual nodes so panes can be rendered and asserted on without
 * a browser document; the workbench mounts them into real DOM.
 */

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: (VNode | string)[];
  onClick?: () => void;
  onContextMenu?: () => void;
  onInput?: (value: string) => void;
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: (VNode | string)[] = [],
  handlers: Pick<VNode, "onClick" | "onContextMenu" | "onInput"> = {},
): VNode {
  return { tag, attrs, children, ...handlers };
}

export function text(node: VNode | string): string {
  if (typeof node === "string") return node;
  return node.children.map(text).join("");
}

/** Depth-first search by class name; tests navigate trees with this. */
export function findAll(node: VNode, className: string): VNode[] {
  const out: VNode[] = [];
  const walk = (n: VNode | string) => {
    if (typeof n === "string") return;
    const classes = (n.attrs.class ?? "").split(/\s+/);
    if (classes.includes(className)) out.push(n);
    n.children.forEach(walk);
  };
  walk(node);
  return out;
}

export function find(node: VNode, className: string): VNode | null {
  return findAll(node, className)[0] ?? null;
}

/** Render a virtual tree into a real element (browser side only). */
export function mount(root: Element, node: VNode): void {
  root.replaceChildren(toDom(root.ownerDocument, node));
}

function toDom(doc: Document, node: VNode | string): Node {
  if (typeof node === "string") return doc.createTextNode(node);
  const el = doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    el.setAttribute(key, value);
  }
  if (node.onClick) el.addEventListener("click", node.onClick);
  if (node.onContextMenu) {
    el.addEventListener("contextmenu", (event) => {
      event.preventDefault();
      node.onContextMenu?.();
    });
  }
  if (node.onInput) {
    el.addEventListener("input", (event) => {
      node.onInput?.((event.target as HTMLInputElement).value);
    });
  }
  for (const child of node.children) el.appendChild(toDom(doc, child));
  return el;
}
